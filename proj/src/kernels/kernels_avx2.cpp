// Compiled with -mavx2; only reached after a runtime CPU check.
#include "walshforge/kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>

namespace walshforge::kernels {
namespace {

// Butterflies with h = 1, 2, 4 inside one 8-lane register.
inline __m256i fwht8(__m256i v) {
  __m256i s = _mm256_shuffle_epi32(v, 0xB1);
  v = _mm256_blend_epi32(_mm256_add_epi32(v, s), _mm256_sub_epi32(s, v), 0xAA);
  s = _mm256_shuffle_epi32(v, 0x4E);
  v = _mm256_blend_epi32(_mm256_add_epi32(v, s), _mm256_sub_epi32(s, v), 0xCC);
  s = _mm256_permute2x128_si256(v, v, 0x01);
  v = _mm256_blend_epi32(_mm256_add_epi32(v, s), _mm256_sub_epi32(s, v), 0xF0);
  return v;
}

void fwht_avx2(std::int32_t* v, std::size_t len) {
  if (len < 8) {
    detail::kScalarTable.fwht_i32(v, len);
    return;
  }
  for (std::size_t i = 0; i < len; i += 8) {
    auto* p = reinterpret_cast<__m256i*>(v + i);
    _mm256_storeu_si256(p, fwht8(_mm256_loadu_si256(p)));
  }
  for (std::size_t h = 8; h < len; h <<= 1) {
    for (std::size_t i = 0; i < len; i += 2 * h) {
      for (std::size_t j = i; j < i + h; j += 8) {
        auto* pa = reinterpret_cast<__m256i*>(v + j);
        auto* pb = reinterpret_cast<__m256i*>(v + j + h);
        const __m256i a = _mm256_loadu_si256(pa);
        const __m256i b = _mm256_loadu_si256(pb);
        _mm256_storeu_si256(pa, _mm256_add_epi32(a, b));
        _mm256_storeu_si256(pb, _mm256_sub_epi32(a, b));
      }
    }
  }
}

void mobius_avx2(std::uint64_t* words, unsigned log2_bits) {
  if (log2_bits < 8) {
    detail::kScalarTable.mobius_u64(words, log2_bits);
    return;
  }
  const std::size_t count = std::size_t{1} << (log2_bits - 6);
  for (std::size_t w = 0; w < count; w += 4) {
    auto* p = reinterpret_cast<__m256i*>(words + w);
    __m256i x = _mm256_loadu_si256(p);
    for (unsigned s = 0; s < 6; ++s) {
      const __m256i mask = _mm256_set1_epi64x(static_cast<long long>(detail::kMobiusMasks[s]));
      const __m128i shift = _mm_cvtsi32_si128(1 << s);
      x = _mm256_xor_si256(x, _mm256_sll_epi64(_mm256_and_si256(x, mask), shift));
    }
    _mm256_storeu_si256(p, x);
  }
  // Strides 1 and 2 words stay inside a register.
  for (std::size_t w = 0; w < count; w += 4) {
    auto* p = reinterpret_cast<__m256i*>(words + w);
    __m256i x = _mm256_loadu_si256(p);
    // lanes (0,1,2,3): stride 1 adds lane0->1, lane2->3
    __m256i lo = _mm256_permute4x64_epi64(x, 0xA0);  // (0,0,2,2)
    x = _mm256_xor_si256(x, _mm256_blend_epi32(_mm256_setzero_si256(), lo, 0xCC));
    // stride 2 adds lanes 0,1 -> 2,3
    lo = _mm256_permute4x64_epi64(x, 0x44);  // (0,1,0,1)
    x = _mm256_xor_si256(x, _mm256_blend_epi32(_mm256_setzero_si256(), lo, 0xF0));
    _mm256_storeu_si256(p, x);
  }
  for (std::size_t h = 4; h < count; h <<= 1) {
    for (std::size_t i = 0; i < count; i += 2 * h) {
      for (std::size_t j = i; j < i + h; j += 4) {
        auto* pa = reinterpret_cast<const __m256i*>(words + j);
        auto* pb = reinterpret_cast<__m256i*>(words + j + h);
        _mm256_storeu_si256(pb, _mm256_xor_si256(_mm256_loadu_si256(pb), _mm256_loadu_si256(pa)));
      }
    }
  }
}

void xor_avx2(std::uint64_t* dst, const std::uint64_t* src, std::size_t count) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    auto* pd = reinterpret_cast<__m256i*>(dst + i);
    auto* ps = reinterpret_cast<const __m256i*>(src + i);
    _mm256_storeu_si256(pd, _mm256_xor_si256(_mm256_loadu_si256(pd), _mm256_loadu_si256(ps)));
  }
  for (; i < count; ++i) dst[i] ^= src[i];
}

const KernelTable kAvx2Table{Isa::Avx2, fwht_avx2, mobius_avx2, xor_avx2};

}  // namespace

namespace detail {
const KernelTable* avx2_table() { return &kAvx2Table; }
}

}  // namespace walshforge::kernels

#else

namespace walshforge::kernels::detail {
const KernelTable* avx2_table() { return nullptr; }
}

#endif
