#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "relhyp/oracle.hpp"
#include "relhyp/simplex.hpp"

namespace relhyp {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

template <>
struct SimplexTraits<Rational> {
  static Rational eps() { return Rational(0); }
};

/// Orbit types of cells in the universal cover of the presentation complex.
/// E1H and E2S cells (and the E0Lambda vertices they live on) make up the
/// peripheral subcomplex.
enum class CellType { E0, E0Lambda, E1X, E1Lambda, E1H, E2R, E2S };

/// A cell: orbit type, translating group element (a normal form) and type
/// parameters. `param` is the X symbol (E1X), the model label (E0Lambda,
/// E1Lambda, E1H, E2S) or the relator index (E2R). E1H carries h, E2S the pair
/// (h, h2).
struct CellId {
  CellType type = CellType::E0;
  Word translate;
  int param = 0;
  ModelElement h;
  ModelElement h2;

  int dim() const noexcept;
  /// Lies in the peripheral subcomplex (relative cochains vanish here).
  bool peripheral() const noexcept;

  auto operator<=>(const CellId&) const = default;
};

/// Translates carrying 1-cells and 2-cells. Every 1-cell type is placed at
/// each one-cell translate (E1H only for model-length <= rho), every 2-cell
/// type at each two-cell translate. A 2-cell is interior when its whole
/// boundary lies in the window.
struct WindowSpec {
  std::vector<Word> one_cell_translates;
  std::vector<Word> two_cell_translates;
  int rho = 1;
  std::string id;
};

struct Window {
  std::string id;
  int rho = 1;
  std::array<std::vector<CellId>, 3> cells;
  std::array<std::map<CellId, Eigen::Index>, 3> index;
  Eigen::SparseMatrix<int> d1;  // 0-cells x 1-cells
  Eigen::SparseMatrix<int> d2;  // 1-cells x 2-cells
  std::vector<bool> interior;   // per 2-cell
  std::vector<std::pair<Eigen::Index, Eigen::Index>> ends;  // (tail, head) per 1-cell
  int boundary_l1_bound = 0;    // max l1-norm of the boundary of an interior 2-cell

  Eigen::Index size(int dim) const { return static_cast<Eigen::Index>(cells[dim].size()); }
  std::optional<Eigen::Index> find(const CellId& c) const;
  std::size_t interior_count() const;
};

/// One- and two-cell translates = vertices of the truncated ball.
WindowSpec ball_window_spec(const RelativePresentation& p, const GroupOracle& o, int radius,
                            int rho);
/// One-cell translates s^k for k in [0, n], two-cell translates for k in
/// [0, n), where s is the first X symbol, else the first generator of the
/// first model.
WindowSpec strip_window_spec(const RelativePresentation& p, const GroupOracle& o, int n,
                             int rho = 1);

Window build_window(const RelativePresentation& p, const GroupOracle& o,
                    const WindowSpec& spec);
Window build_window(const RelativePresentation& p, const GroupOracle& o, int radius, int rho);

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
struct Chain {
  int dim = 0;
  Vec<Scalar> values;
};

template <class Scalar>
struct Cochain {
  int dim = 0;
  Vec<Scalar> values;
};

template <class Scalar>
Chain<Scalar> zero_chain(const Window& w, int dim) {
  return {dim, Vec<Scalar>::Zero(w.size(dim))};
}

template <class Scalar>
Cochain<Scalar> zero_cochain(const Window& w, int dim) {
  return {dim, Vec<Scalar>::Zero(w.size(dim))};
}

template <class Scalar>
Chain<Scalar> boundary(const Window& w, const Chain<Scalar>& c) {
  if (c.dim == 2) return {1, w.d2.cast<Scalar>() * c.values};
  if (c.dim == 1) return {0, w.d1.cast<Scalar>() * c.values};
  throw std::invalid_argument("boundary of a 0-chain");
}

/// (δc)(e) = c(∂e). On 2-cells that are not interior the value is undefined
/// and reported as 0.
template <class Scalar>
Cochain<Scalar> coboundary(const Window& w, const Cochain<Scalar>& c) {
  if (c.dim == 0) return {1, w.d1.cast<Scalar>().transpose() * c.values};
  if (c.dim != 1) throw std::invalid_argument("coboundary of a 2-cochain");
  Vec<Scalar> v = w.d2.cast<Scalar>().transpose() * c.values;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!w.interior[i]) v(i) = Scalar(0);
  return {2, v};
}

template <class Scalar>
Scalar pair(const Cochain<Scalar>& z, const Chain<Scalar>& d) {
  if (z.dim != d.dim) throw std::invalid_argument("pairing of mismatched dimensions");
  return z.values.dot(d.values);
}

template <class Scalar>
Scalar linf_norm(const Vec<Scalar>& v) {
  Scalar best(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    Scalar a = v(i) < Scalar(0) ? Scalar(-v(i)) : v(i);
    if (a > best) best = a;
  }
  return best;
}

template <class Scalar>
bool is_relative(const Window& w, const Cochain<Scalar>& c) {
  for (Eigen::Index i = 0; i < c.values.size(); ++i)
    if (w.cells[c.dim][i].peripheral() && c.values(i) != Scalar(0)) return false;
  return true;
}

/// Edge weights of the relative metric: 1 for E1X, 1/2 for E1Lambda, 0 on the
/// peripheral subcomplex.
double edge_weight(const CellId& c);
/// Sum of |c(e)| * edge_weight(e) over 1-cells.
double weighted_l1(const Window& w, const Chain<double>& c);

enum class CocycleFamily { Ones, Zero, Coboundary };
/// Ones: 1 on every interior relator cell. Zero: 0. Coboundary: δh for h equal
/// to 1 on every 1-cell outside the peripheral subcomplex.
Cochain<double> make_cocycle(const Window& w, CocycleFamily family);

template <class Scalar>
struct LpCertificate {
  enum class Status { Primitive, Infeasible } status = Status::Primitive;
  Cochain<Scalar> m;  // Primitive: relative 1-cochain with δm = z on interior cells
  Scalar norm = Scalar(0);
  /// Infeasible: interior 2-cells with their Farkas multipliers.
  std::vector<std::pair<Eigen::Index, Scalar>> witness;
  std::string window_id;
  std::string cocycle_id;
};

/// Minimizes ||m||_∞ over relative 1-cochains m with δm = z on every interior
/// 2-cell. Throws PreconditionError if z is not relative, SolverError when the
/// simplex does not terminate with an answer.
template <class Scalar>
LpCertificate<Scalar> min_linf_primitive(const Window& w, const Cochain<Scalar>& z,
                                         const std::string& cocycle_id = "");

extern template LpCertificate<double> min_linf_primitive(const Window&, const Cochain<double>&,
                                                         const std::string&);
extern template LpCertificate<Rational> min_linf_primitive(const Window&,
                                                           const Cochain<Rational>&,
                                                           const std::string&);

enum class ScanVerdict { BoundedConsistent, LinearGrowthWitness };

struct GrowthRow {
  int radius = 0;
  double norm = 0;
  bool feasible = true;
  std::size_t one_cells = 0;
  std::size_t interior_two_cells = 0;
};

struct GrowthReport {
  std::vector<GrowthRow> rows;
  double slope = 0;
  ScanVerdict verdict = ScanVerdict::BoundedConsistent;
};

struct WindowCocycle {
  Window window;
  Cochain<double> z;
};

/// Solves the LP for each radius (independently, in parallel). The verdict is
/// linear-growth-witness when the least-squares slope of norm against radius
/// is positive and the norms increase strictly.
GrowthReport growth_scan(const std::function<WindowCocycle(int)>& family,
                         const std::vector<int>& radii, bool exact = false);

std::string to_string(ScanVerdict v);

struct EdgeStep {
  Eigen::Index cell = 0;
  int orientation = 1;  // +1 along the cell, -1 against it
};

struct EdgePath {
  Eigen::Index start = 0;  // 0-cell index
  std::vector<EdgeStep> steps;

  Eigen::Index end(const Window& w) const;
};

/// Throws PreconditionError unless consecutive steps share endpoints.
void check_path(const Window& w, const EdgePath& path);
double rel_path_length(const Window& w, const EdgePath& path);

/// ν(γ) = <m, γ> - C ||z||_∞ l_rel(γ).
double nu(const Window& w, const EdgePath& path, const Cochain<double>& m,
          const Cochain<double>& z, double C);

struct MaxNu {
  double value = 0;
  EdgePath path;
  std::size_t paths_examined = 0;
};

/// Maximum of ν over simple edge paths (no repeated vertex) from `from` to
/// `to` with at most `cap` edges. Throws ResourceError when no such path
/// exists.
MaxNu windowed_max_nu(const Window& w, const Cochain<double>& m, const Cochain<double>& z,
                      double C, Eigen::Index from, Eigen::Index to, int cap);

struct CrucialSection {
  Cochain<double> d;  // 0-cochain
  Cochain<double> k;  // k = -m + δd
  double k_norm = 0;
  bool relative = false;
  std::size_t unreachable = 0;  // vertices with no path within the cap (d = 0)
};

/// Builds d from windowed maxima of ν measured from the identity vertex; on
/// E0Lambda vertices d takes the value at the coset representative (the
/// lexicographically least translate of the same coset in the window).
CrucialSection crucial_section(const RelativePresentation& p, const GroupOracle& o,
                               const Window& w, const Cochain<double>& m,
                               const Cochain<double>& z, double C, int cap);

/// Coset representative index for every E0Lambda vertex (other vertices map
/// to themselves).
std::vector<Eigen::Index> coset_representatives(const RelativePresentation& p,
                                                const GroupOracle& o, const Window& w);

std::string to_string(CellType t);
json cell_to_json(const RelativePresentation& p, const CellId& c);
json window_to_json(const RelativePresentation& p, const Window& w);
json lp_certificate_to_json(const RelativePresentation& p, const Window& w,
                            const LpCertificate<double>& cert);

}  // namespace relhyp
