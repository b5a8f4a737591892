#include "walshforge/kernels.hpp"

namespace walshforge::kernels {
namespace {

void fwht_scalar(std::int32_t* v, std::size_t len) {
  for (std::size_t h = 1; h < len; h <<= 1) {
    for (std::size_t i = 0; i < len; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const std::int32_t a = v[j];
        const std::int32_t b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

void mobius_scalar(std::uint64_t* words, unsigned log2_bits) {
  const unsigned in_word = log2_bits < 6 ? log2_bits : 6;
  const std::size_t count = log2_bits <= 6 ? 1 : std::size_t{1} << (log2_bits - 6);
  for (unsigned s = 0; s < in_word; ++s) {
    const std::uint64_t mask = detail::kMobiusMasks[s];
    const unsigned shift = 1u << s;
    for (std::size_t w = 0; w < count; ++w) words[w] ^= (words[w] & mask) << shift;
  }
  for (std::size_t h = 1; h < count; h <<= 1) {
    for (std::size_t i = 0; i < count; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) words[j + h] ^= words[j];
    }
  }
}

void xor_scalar(std::uint64_t* dst, const std::uint64_t* src, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) dst[i] ^= src[i];
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{Isa::Scalar, fwht_scalar, mobius_scalar, xor_scalar};
}

}  // namespace walshforge::kernels
