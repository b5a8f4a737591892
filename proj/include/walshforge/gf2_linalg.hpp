#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace walshforge {

/// Null space of the GF(2)-linear map on n-bit vectors whose image of the
/// k-th basis vector is images[k]. Returns a basis (reduced, deterministic).
std::vector<std::uint32_t> null_space(std::span<const std::uint32_t> images, unsigned n);

/// Rank of the same map.
unsigned rank_of(std::span<const std::uint32_t> images, unsigned n);

/// Row-echelon basis of long GF(2) vectors, grown one vector at a time.
/// Each stored vector's lowest set bit is its pivot and no two pivots collide,
/// so reduction only ever moves the lowest set bit upward.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t bits);

  std::size_t bits() const noexcept { return bits_; }
  std::size_t words() const noexcept { return words_; }
  std::size_t rank() const noexcept { return rank_; }

  /// Reduces v against the basis and keeps the remainder if nonzero.
  /// Returns false when v was dependent (reduced to zero).
  bool insert(std::span<std::uint64_t> v);

 private:
  std::size_t bits_;
  std::size_t words_;
  std::size_t rank_ = 0;
  std::vector<std::uint64_t> storage_;         // rank_ rows of words_ each
  std::vector<std::int32_t> pivot_row_;        // bit -> row index or -1
};

}  // namespace walshforge
