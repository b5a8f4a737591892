#pragma once

// Data-parallel inner loops with a scalar reference implementation and
// SIMD variants (AVX2 on x86-64, NEON on AArch64) chosen at runtime.
// Every variant must produce bit-identical output to the scalar one.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace walshforge::kernels {

enum class Isa { Scalar, Avx2, Neon };

const char* isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  /// In-place unnormalized Walsh-Hadamard transform; len is a power of two.
  void (*fwht_i32)(std::int32_t* values, std::size_t len);
  /// In-place binary Moebius transform of 2^log2_bits packed bits.
  void (*mobius_u64)(std::uint64_t* words, unsigned log2_bits);
  /// dst[i] ^= src[i] for i < count.
  void (*xor_into)(std::uint64_t* dst, const std::uint64_t* src, std::size_t count);
};

/// Table for the requested ISA, or nullptr when it is not compiled in or the
/// CPU lacks it.
const KernelTable* table_for(Isa isa);

/// ISAs usable on this machine, scalar first.
std::vector<Isa> available();

/// The table used by the library: the widest available ISA unless the
/// WALSHFORGE_ISA environment variable names another one, or force() was called.
const KernelTable& active();
void force(Isa isa);

inline void fwht(std::span<std::int32_t> values) { active().fwht_i32(values.data(), values.size()); }
inline void mobius(std::span<std::uint64_t> words, unsigned log2_bits) {
  active().mobius_u64(words.data(), log2_bits);
}
inline void xor_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  active().xor_into(dst.data(), src.data(), dst.size() < src.size() ? dst.size() : src.size());
}

namespace detail {
extern const KernelTable kScalarTable;
const KernelTable* avx2_table();  // nullptr if not compiled
const KernelTable* neon_table();  // nullptr if not compiled

// Shared by SIMD variants for the sub-word stages.
constexpr std::uint64_t kMobiusMasks[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0f0f0f0f0f0f0f0fULL,
    0x00ff00ff00ff00ffULL, 0x0000ffff0000ffffULL, 0x00000000ffffffffULL,
};
}  // namespace detail

}  // namespace walshforge::kernels
