#include "walshforge/kernels.hpp"

#if defined(__ARM_NEON) || defined(__ARM_NEON__)
#include <arm_neon.h>

namespace walshforge::kernels {
namespace {

void fwht_neon(std::int32_t* v, std::size_t len) {
  if (len < 8) {
    detail::kScalarTable.fwht_i32(v, len);
    return;
  }
  // h = 1, 2 scalar; vector butterflies from h = 4.
  for (std::size_t h = 1; h < 4; h <<= 1) {
    for (std::size_t i = 0; i < len; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const std::int32_t a = v[j];
        const std::int32_t b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
  for (std::size_t h = 4; h < len; h <<= 1) {
    for (std::size_t i = 0; i < len; i += 2 * h) {
      for (std::size_t j = i; j < i + h; j += 4) {
        const int32x4_t a = vld1q_s32(v + j);
        const int32x4_t b = vld1q_s32(v + j + h);
        vst1q_s32(v + j, vaddq_s32(a, b));
        vst1q_s32(v + j + h, vsubq_s32(a, b));
      }
    }
  }
}

void mobius_neon(std::uint64_t* words, unsigned log2_bits) {
  if (log2_bits < 8) {
    detail::kScalarTable.mobius_u64(words, log2_bits);
    return;
  }
  const std::size_t count = std::size_t{1} << (log2_bits - 6);
  for (std::size_t w = 0; w < count; ++w) {
    std::uint64_t x = words[w];
    for (unsigned s = 0; s < 6; ++s) x ^= (x & detail::kMobiusMasks[s]) << (1u << s);
    words[w] = x;
  }
  for (std::size_t i = 0; i < count; i += 2) words[i + 1] ^= words[i];
  for (std::size_t h = 2; h < count; h <<= 1) {
    for (std::size_t i = 0; i < count; i += 2 * h) {
      for (std::size_t j = i; j < i + h; j += 2) {
        vst1q_u64(words + j + h, veorq_u64(vld1q_u64(words + j + h), vld1q_u64(words + j)));
      }
    }
  }
}

void xor_neon(std::uint64_t* dst, const std::uint64_t* src, std::size_t count) {
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) vst1q_u64(dst + i, veorq_u64(vld1q_u64(dst + i), vld1q_u64(src + i)));
  for (; i < count; ++i) dst[i] ^= src[i];
}

const KernelTable kNeonTable{Isa::Neon, fwht_neon, mobius_neon, xor_neon};

}  // namespace

namespace detail {
const KernelTable* neon_table() { return &kNeonTable; }
}

}  // namespace walshforge::kernels

#else

namespace walshforge::kernels::detail {
const KernelTable* neon_table() { return nullptr; }
}

#endif
