#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace relhyp {

using IntVector = std::vector<std::int64_t>;

/// Integer column span of a finite set of vectors in Z^d, kept in column
/// echelon form together with the unimodular transform that produced it.
class IntegerLattice {
 public:
  IntegerLattice(int dim, std::vector<IntVector> generators);

  int dim() const noexcept { return dim_; }
  std::size_t generator_count() const noexcept { return gens_.size(); }
  int rank() const noexcept { return static_cast<int>(pivots_.size()); }

  /// Integer coefficients c with sum_j c_j * generator_j == v, if v lies in
  /// the lattice.
  std::optional<IntVector> solve(const IntVector& v) const;
  bool contains(const IntVector& v) const { return solve(v).has_value(); }

 private:
  int dim_;
  std::vector<IntVector> gens_;
  std::vector<IntVector> echelon_;    // columns
  std::vector<IntVector> transform_;  // columns: echelon_j = sum_i transform_j[i] * gens_i
  std::vector<std::pair<int, int>> pivots_;  // (row, column)
};

}  // namespace relhyp
