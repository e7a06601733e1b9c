#include "relhyp/integer_lattice.hpp"

#include <cstdlib>
#include <utility>

#include "relhyp/errors.hpp"

namespace relhyp {

IntegerLattice::IntegerLattice(int dim, std::vector<IntVector> generators)
    : dim_(dim), gens_(std::move(generators)) {
  const std::size_t m = gens_.size();
  echelon_ = gens_;
  for (const auto& g : echelon_)
    if (static_cast<int>(g.size()) != dim_)
      throw PreconditionError("lattice generator has wrong dimension");
  transform_.assign(m, IntVector(m, 0));
  for (std::size_t j = 0; j < m; ++j) transform_[j][j] = 1;

  auto axpy = [&](std::size_t dst, std::int64_t q, std::size_t src) {
    // column dst -= q * column src
    for (int r = 0; r < dim_; ++r) echelon_[dst][r] -= q * echelon_[src][r];
    for (std::size_t r = 0; r < m; ++r) transform_[dst][r] -= q * transform_[src][r];
  };

  std::size_t col = 0;
  for (int row = 0; row < dim_ && col < m; ++row) {
    // Euclid on the entries of this row among the remaining columns.
    while (true) {
      std::size_t best = m;
      for (std::size_t j = col; j < m; ++j) {
        if (echelon_[j][row] == 0) continue;
        if (best == m || std::llabs(echelon_[j][row]) < std::llabs(echelon_[best][row]))
          best = j;
      }
      if (best == m) break;
      std::swap(echelon_[col], echelon_[best]);
      std::swap(transform_[col], transform_[best]);
      bool done = true;
      for (std::size_t j = col + 1; j < m; ++j) {
        if (echelon_[j][row] == 0) continue;
        axpy(j, echelon_[j][row] / echelon_[col][row], col);
        if (echelon_[j][row] != 0) done = false;
      }
      if (done) break;
    }
    if (echelon_[col][row] != 0) {
      if (echelon_[col][row] < 0) {
        for (auto& v : echelon_[col]) v = -v;
        for (auto& v : transform_[col]) v = -v;
      }
      pivots_.emplace_back(row, static_cast<int>(col));
      ++col;
    }
  }
}

std::optional<IntVector> IntegerLattice::solve(const IntVector& v) const {
  if (static_cast<int>(v.size()) != dim_)
    throw PreconditionError("lattice query has wrong dimension");
  IntVector rest = v;
  const std::size_t m = gens_.size();
  IntVector y(m, 0);
  for (auto [row, col] : pivots_) {
    // Rows above the pivot must already be cleared.
    const auto pivot = echelon_[col][row];
    if (rest[row] % pivot != 0) return std::nullopt;
    const auto q = rest[row] / pivot;
    y[col] = q;
    for (int r = 0; r < dim_; ++r) rest[r] -= q * echelon_[col][r];
  }
  for (auto r : rest)
    if (r != 0) return std::nullopt;
  IntVector c(m, 0);
  for (std::size_t j = 0; j < m; ++j)
    if (y[j] != 0)
      for (std::size_t i = 0; i < m; ++i) c[i] += y[j] * transform_[j][i];
  return c;
}

}  // namespace relhyp
