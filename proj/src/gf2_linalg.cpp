#include "walshforge/gf2_linalg.hpp"

#include <bit>

#include "walshforge/kernels.hpp"

namespace walshforge {

namespace {

// Column-pivot elimination on the n x n matrix whose column k is images[k].
// Returns the reduced column echelon data: for each pivot column the row it
// owns, and the transformation that records which input combination produced
// each column.
struct Elimination {
  std::vector<std::uint32_t> cols;     // reduced columns
  std::vector<std::uint32_t> combos;   // combos[k]: input combination giving cols[k]
  unsigned rank = 0;
};

Elimination eliminate(std::span<const std::uint32_t> images, unsigned n) {
  Elimination e;
  e.cols.assign(images.begin(), images.end());
  e.combos.resize(n);
  for (unsigned k = 0; k < n; ++k) e.combos[k] = std::uint32_t{1} << k;
  std::vector<bool> used(n, false);
  for (unsigned row = 0; row < n; ++row) {
    const std::uint32_t bit = std::uint32_t{1} << row;
    unsigned pivot = n;
    for (unsigned k = 0; k < n; ++k) {
      if (!used[k] && (e.cols[k] & bit)) {
        pivot = k;
        break;
      }
    }
    if (pivot == n) continue;
    used[pivot] = true;
    ++e.rank;
    for (unsigned k = 0; k < n; ++k) {
      if (k != pivot && (e.cols[k] & bit)) {
        e.cols[k] ^= e.cols[pivot];
        e.combos[k] ^= e.combos[pivot];
      }
    }
  }
  return e;
}

}  // namespace

std::vector<std::uint32_t> null_space(std::span<const std::uint32_t> images, unsigned n) {
  const Elimination e = eliminate(images, n);
  std::vector<std::uint32_t> basis;
  for (unsigned k = 0; k < n; ++k) {
    if (e.cols[k] == 0) basis.push_back(e.combos[k]);
  }
  return basis;
}

unsigned rank_of(std::span<const std::uint32_t> images, unsigned n) { return eliminate(images, n).rank; }

EchelonBasis::EchelonBasis(std::size_t bits)
    : bits_(bits), words_((bits + 63) / 64), pivot_row_(bits, -1) {}

bool EchelonBasis::insert(std::span<std::uint64_t> v) {
  const auto& k = kernels::active();
  std::size_t w = 0;
  while (true) {
    while (w < words_ && v[w] == 0) ++w;
    if (w == words_) return false;
    const std::size_t bit = w * 64 + static_cast<std::size_t>(std::countr_zero(v[w]));
    const std::int32_t row = pivot_row_[bit];
    if (row < 0) {
      storage_.insert(storage_.end(), v.begin(), v.begin() + static_cast<std::ptrdiff_t>(words_));
      pivot_row_[bit] = static_cast<std::int32_t>(rank_);
      ++rank_;
      return true;
    }
    const std::uint64_t* src = storage_.data() + static_cast<std::size_t>(row) * words_;
    k.xor_into(v.data() + w, src + w, words_ - w);
  }
}

}  // namespace walshforge
