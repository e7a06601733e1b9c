#include "relhyp/cochain.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "relhyp/cayley.hpp"
#include "relhyp/errors.hpp"
#include "relhyp/parallel.hpp"

namespace relhyp {

int CellId::dim() const noexcept {
  switch (type) {
    case CellType::E0:
    case CellType::E0Lambda:
      return 0;
    case CellType::E1X:
    case CellType::E1Lambda:
    case CellType::E1H:
      return 1;
    case CellType::E2R:
    case CellType::E2S:
      break;
  }
  return 2;
}

bool CellId::peripheral() const noexcept {
  return type == CellType::E0Lambda || type == CellType::E1H || type == CellType::E2S;
}

std::optional<Eigen::Index> Window::find(const CellId& c) const {
  const auto& idx = index[c.dim()];
  auto it = idx.find(c);
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

std::size_t Window::interior_count() const {
  return static_cast<std::size_t>(std::count(interior.begin(), interior.end(), true));
}

WindowSpec ball_window_spec(const RelativePresentation& p, const GroupOracle& o, int radius,
                            int rho) {
  auto ball = truncated_ball(p, o, radius, rho);
  WindowSpec s;
  s.one_cell_translates = ball.vertices;
  s.two_cell_translates = ball.vertices;
  s.rho = rho;
  s.id = "ball(r=" + std::to_string(radius) + ",rho=" + std::to_string(rho) + ")";
  return s;
}

WindowSpec strip_window_spec(const RelativePresentation& p, const GroupOracle& o, int n,
                             int rho) {
  if (n < 0) throw PreconditionError("strip length must be nonnegative");
  Letter s;
  if (!p.x_symbols().empty()) {
    s = Letter::x(0, 1);
  } else if (!p.models().empty()) {
    const auto& m = p.models().front();
    s = Letter::h(m.label(), m.generators().front());
  } else {
    throw PreconditionError("strip window needs a generator");
  }
  WindowSpec spec;
  spec.rho = rho;
  Word power;
  for (int k = 0; k <= n; ++k) {
    Word g = o.normal_form(p, power);
    spec.one_cell_translates.push_back(g);
    if (k < n) spec.two_cell_translates.push_back(g);
    power.letters.push_back(s);
  }
  spec.id = "strip(" + to_string(p, s) + ",n=" + std::to_string(n) + ")";
  return spec;
}

namespace {

class WindowBuilder {
 public:
  WindowBuilder(const RelativePresentation& p, const GroupOracle& o) : p_(p), o_(o) {}

  Word times(const Word& g, const Letter& l) const { return o_.normal_form(p_, g * Word{l}); }

  CellId e0(const Word& g) const { return {CellType::E0, g, 0, {}, {}}; }
  CellId e0l(const Word& g, int label) const { return {CellType::E0Lambda, g, label, {}, {}}; }
  CellId e1x(const Word& g, int s) const { return {CellType::E1X, g, s, {}, {}}; }
  CellId e1l(const Word& g, int label) const { return {CellType::E1Lambda, g, label, {}, {}}; }
  CellId e1h(const Word& g, int label, const ModelElement& h) const {
    return {CellType::E1H, g, label, h, {}};
  }

  std::vector<std::pair<CellId, int>> boundary1(const CellId& c) const {
    switch (c.type) {
      case CellType::E1X:
        return {{e0(times(c.translate, Letter::x(c.param, 1))), 1}, {e0(c.translate), -1}};
      case CellType::E1Lambda:
        return {{e0l(c.translate, c.param), 1}, {e0(c.translate), -1}};
      case CellType::E1H:
        return {{e0l(times(c.translate, Letter::h(c.param, c.h)), c.param), 1},
                {e0l(c.translate, c.param), -1}};
      default:
        break;
    }
    return {};
  }

  std::vector<std::pair<CellId, int>> boundary2(const CellId& c) const {
    std::vector<std::pair<CellId, int>> out;
    if (c.type == CellType::E2S) {
      const auto& m = p_.model(c.param);
      out.emplace_back(e1h(c.translate, c.param, c.h), 1);
      out.emplace_back(e1h(times(c.translate, Letter::h(c.param, c.h)), c.param, c.h2), 1);
      auto hh = m.product(c.h, c.h2);
      if (!m.is_identity(hh)) out.emplace_back(e1h(c.translate, c.param, hh), -1);
      return out;
    }
    Word cur = c.translate;
    for (const auto& l : p_.relators()[c.param].letters) {
      if (!l.is_h && l.sign > 0) {
        out.emplace_back(e1x(cur, l.index), 1);
        cur = times(cur, l);
      } else if (!l.is_h) {
        cur = times(cur, l);
        out.emplace_back(e1x(cur, l.index), -1);
      } else {
        Word next = times(cur, l);
        out.emplace_back(e1l(cur, l.index), 1);
        out.emplace_back(e1h(cur, l.index, l.elem), 1);
        out.emplace_back(e1l(next, l.index), -1);
        cur = std::move(next);
      }
    }
    return out;
  }

 private:
  const RelativePresentation& p_;
  const GroupOracle& o_;
};

void index_cells(Window& w, int dim, const std::set<CellId>& cells) {
  w.cells[dim].assign(cells.begin(), cells.end());
  for (std::size_t i = 0; i < w.cells[dim].size(); ++i)
    w.index[dim].emplace(w.cells[dim][i], static_cast<Eigen::Index>(i));
}

}  // namespace

Window build_window(const RelativePresentation& p, const GroupOracle& o,
                    const WindowSpec& spec) {
  const WindowBuilder b(p, o);
  Window w;
  w.id = spec.id;
  w.rho = spec.rho;

  auto normalize = [&](const std::vector<Word>& ts) {
    auto forms = o.normal_forms(p, ts);
    std::set<Word> unique(forms.begin(), forms.end());
    return unique;
  };
  const auto t1 = normalize(spec.one_cell_translates);
  const auto t2 = normalize(spec.two_cell_translates);

  std::set<CellId> ones;
  for (const auto& g : t1) {
    for (std::size_t s = 0; s < p.x_symbols().size(); ++s)
      ones.insert(b.e1x(g, static_cast<int>(s)));
    for (const auto& m : p.models()) {
      ones.insert(b.e1l(g, m.label()));
      for (const auto& h : m.elements_up_to_length(spec.rho)) ones.insert(b.e1h(g, m.label(), h));
    }
  }
  std::set<CellId> twos;
  for (const auto& g : t2) {
    for (std::size_t r = 0; r < p.relators().size(); ++r)
      twos.insert({CellType::E2R, g, static_cast<int>(r), {}, {}});
    for (const auto& m : p.models()) {
      if (!m.is_finite()) continue;
      const auto elems = m.elements_up_to_length(spec.rho);
      for (const auto& h : elems)
        for (const auto& h2 : elems) twos.insert({CellType::E2S, g, m.label(), h, h2});
    }
  }

  std::vector<std::vector<std::pair<CellId, int>>> d1_cols;
  std::set<CellId> zeros;
  for (const auto& c : ones) {
    d1_cols.push_back(b.boundary1(c));
    for (const auto& [v, s] : d1_cols.back()) zeros.insert(v);
  }
  std::vector<std::vector<std::pair<CellId, int>>> d2_cols;
  for (const auto& c : twos) d2_cols.push_back(b.boundary2(c));

  index_cells(w, 0, zeros);
  index_cells(w, 1, ones);
  index_cells(w, 2, twos);

  std::vector<Eigen::Triplet<int>> trip;
  w.ends.resize(d1_cols.size());
  for (std::size_t j = 0; j < d1_cols.size(); ++j) {
    // boundary1 lists the head first; a loop edge still gets both ends.
    w.ends[j] = {w.index[0].at(d1_cols[j][1].first), w.index[0].at(d1_cols[j][0].first)};
    for (const auto& [v, s] : d1_cols[j])
      trip.emplace_back(w.index[0].at(v), static_cast<int>(j), s);
  }
  w.d1.resize(w.size(0), w.size(1));
  w.d1.setFromTriplets(trip.begin(), trip.end());

  trip.clear();
  w.interior.assign(d2_cols.size(), true);
  for (std::size_t j = 0; j < d2_cols.size(); ++j) {
    std::map<Eigen::Index, int> col;
    for (const auto& [e, s] : d2_cols[j]) {
      auto it = w.index[1].find(e);
      if (it == w.index[1].end()) {
        w.interior[j] = false;
        continue;
      }
      col[it->second] += s;
    }
    int l1 = 0;
    for (auto [i, s] : col) {
      if (s != 0) trip.emplace_back(i, static_cast<int>(j), s);
      l1 += std::abs(s);
    }
    if (w.interior[j]) w.boundary_l1_bound = std::max(w.boundary_l1_bound, l1);
  }
  w.d2.resize(w.size(1), w.size(2));
  w.d2.setFromTriplets(trip.begin(), trip.end());
  return w;
}

Window build_window(const RelativePresentation& p, const GroupOracle& o, int radius, int rho) {
  return build_window(p, o, ball_window_spec(p, o, radius, rho));
}

double edge_weight(const CellId& c) {
  switch (c.type) {
    case CellType::E1X:
      return 1.0;
    case CellType::E1Lambda:
      return 0.5;
    default:
      break;
  }
  return 0.0;
}

double weighted_l1(const Window& w, const Chain<double>& c) {
  if (c.dim != 1) throw std::invalid_argument("weighted length of a non-1-chain");
  double total = 0;
  for (Eigen::Index i = 0; i < c.values.size(); ++i)
    total += std::abs(c.values(i)) * edge_weight(w.cells[1][i]);
  return total;
}

Cochain<double> make_cocycle(const Window& w, CocycleFamily family) {
  switch (family) {
    case CocycleFamily::Zero:
      return zero_cochain<double>(w, 2);
    case CocycleFamily::Ones: {
      auto z = zero_cochain<double>(w, 2);
      for (Eigen::Index i = 0; i < w.size(2); ++i)
        if (w.interior[i] && w.cells[2][i].type == CellType::E2R) z.values(i) = 1.0;
      return z;
    }
    case CocycleFamily::Coboundary: {
      auto h = zero_cochain<double>(w, 1);
      for (Eigen::Index i = 0; i < w.size(1); ++i)
        if (!w.cells[1][i].peripheral()) h.values(i) = 1.0;
      return coboundary(w, h);
    }
  }
  return zero_cochain<double>(w, 2);
}

template <class Scalar>
LpCertificate<Scalar> min_linf_primitive(const Window& w, const Cochain<Scalar>& z,
                                         const std::string& cocycle_id) {
  if (z.dim != 2 || z.values.size() != w.size(2))
    throw PreconditionError("cocycle does not match the window's 2-cells");
  if (!is_relative(w, z)) throw PreconditionError("cocycle is not relative");

  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  std::vector<Eigen::Index> free_cells;  // 1-cells outside the peripheral subcomplex
  std::vector<Eigen::Index> column_of(w.size(1), -1);
  for (Eigen::Index i = 0; i < w.size(1); ++i)
    if (!w.cells[1][i].peripheral()) {
      column_of[i] = static_cast<Eigen::Index>(free_cells.size());
      free_cells.push_back(i);
    }
  std::vector<Eigen::Index> rows;
  for (Eigen::Index e = 0; e < w.size(2); ++e)
    if (w.interior[e]) rows.push_back(e);

  // Variables: s_j = m_j + t >= 0, then t >= 0, then slacks for s_j <= 2t.
  const Eigen::Index J = static_cast<Eigen::Index>(free_cells.size());
  const Eigen::Index R = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index tcol = J;
  Matrix A = Matrix::Zero(R + J, 2 * J + 1);
  Vec<Scalar> b = Vec<Scalar>::Zero(R + J);
  Vec<Scalar> c = Vec<Scalar>::Zero(2 * J + 1);
  c(tcol) = Scalar(1);
  for (Eigen::Index r = 0; r < R; ++r) {
    for (Eigen::SparseMatrix<int>::InnerIterator it(w.d2, rows[r]); it; ++it) {
      const Eigen::Index col = column_of[it.row()];
      if (col < 0) continue;
      A(r, col) += Scalar(it.value());
      A(r, tcol) -= Scalar(it.value());
    }
    b(r) = z.values(rows[r]);
  }
  for (Eigen::Index j = 0; j < J; ++j) {
    A(R + j, j) = Scalar(1);
    A(R + j, tcol) = Scalar(-2);
    A(R + j, J + 1 + j) = Scalar(1);
  }

  auto sol = simplex_solve<Scalar>(A, b, c);
  LpCertificate<Scalar> cert;
  cert.window_id = w.id;
  cert.cocycle_id = cocycle_id;
  if (sol.status == LpStatus::Infeasible) {
    cert.status = LpCertificate<Scalar>::Status::Infeasible;
    for (Eigen::Index r = 0; r < R; ++r)
      if (sol.y(r) != Scalar(0)) cert.witness.emplace_back(rows[r], sol.y(r));
    return cert;
  }
  if (sol.status != LpStatus::Optimal)
    throw SolverError(sol.status == LpStatus::Unbounded ? "LP reported unbounded"
                                                        : "LP iteration limit reached");
  cert.m = zero_cochain<Scalar>(w, 1);
  const Scalar t = sol.x(tcol);
  for (Eigen::Index j = 0; j < J; ++j) cert.m.values(free_cells[j]) = sol.x(j) - t;
  cert.norm = t;
  return cert;
}

template LpCertificate<double> min_linf_primitive(const Window&, const Cochain<double>&,
                                                  const std::string&);
template LpCertificate<Rational> min_linf_primitive(const Window&, const Cochain<Rational>&,
                                                    const std::string&);

GrowthReport growth_scan(const std::function<WindowCocycle(int)>& family,
                         const std::vector<int>& radii, bool exact) {
  GrowthReport report;
  report.rows.resize(radii.size());
  parallel_for(radii.size(), [&](std::size_t i) {
    auto [w, z] = family(radii[i]);
    GrowthRow& row = report.rows[i];
    row.radius = radii[i];
    row.one_cells = static_cast<std::size_t>(w.size(1));
    row.interior_two_cells = w.interior_count();
    if (exact) {
      // Doubles convert to rationals without rounding.
      Cochain<Rational> zq{2, z.values.unaryExpr([](double v) { return Rational(v); })};
      auto cert = min_linf_primitive<Rational>(w, zq);
      row.feasible = cert.status == LpCertificate<Rational>::Status::Primitive;
      row.norm = static_cast<double>(cert.norm);
    } else {
      auto cert = min_linf_primitive<double>(w, z);
      row.feasible = cert.status == LpCertificate<double>::Status::Primitive;
      row.norm = cert.norm;
    }
  });

  const double n = static_cast<double>(report.rows.size());
  double mx = 0, my = 0;
  for (const auto& r : report.rows) {
    mx += r.radius;
    my += r.norm;
  }
  if (n > 0) {
    mx /= n;
    my /= n;
  }
  double sxy = 0, sxx = 0;
  for (const auto& r : report.rows) {
    sxy += (r.radius - mx) * (r.norm - my);
    sxx += (r.radius - mx) * (r.radius - mx);
  }
  report.slope = sxx > 0 ? sxy / sxx : 0;
  bool increasing = report.rows.size() >= 2;
  for (std::size_t i = 1; i < report.rows.size(); ++i)
    if (!(report.rows[i].norm > report.rows[i - 1].norm + 1e-9) || !report.rows[i].feasible)
      increasing = false;
  report.verdict = report.slope > 1e-6 && increasing ? ScanVerdict::LinearGrowthWitness
                                                     : ScanVerdict::BoundedConsistent;
  return report;
}

std::string to_string(ScanVerdict v) {
  return v == ScanVerdict::BoundedConsistent ? "bounded-consistent" : "linear-growth-witness";
}

Eigen::Index EdgePath::end(const Window& w) const {
  Eigen::Index v = start;
  for (const auto& s : steps) v = s.orientation > 0 ? w.ends[s.cell].second : w.ends[s.cell].first;
  return v;
}

void check_path(const Window& w, const EdgePath& path) {
  if (path.start < 0 || path.start >= w.size(0))
    throw PreconditionError("path start is not a window vertex");
  const auto& ends = w.ends;
  Eigen::Index v = path.start;
  for (const auto& s : path.steps) {
    if (s.cell < 0 || s.cell >= w.size(1) || (s.orientation != 1 && s.orientation != -1))
      throw PreconditionError("path uses an edge outside the window");
    auto [tail, head] = ends[s.cell];
    if (s.orientation < 0) std::swap(tail, head);
    if (tail != v) throw PreconditionError("path steps are not consecutive");
    v = head;
  }
}

double rel_path_length(const Window& w, const EdgePath& path) {
  double total = 0;
  for (const auto& s : path.steps) total += edge_weight(w.cells[1][s.cell]);
  return total;
}

double nu(const Window& w, const EdgePath& path, const Cochain<double>& m,
          const Cochain<double>& z, double C) {
  check_path(w, path);
  double pairing = 0;
  for (const auto& s : path.steps) pairing += s.orientation * m.values(s.cell);
  return pairing - C * linf_norm(z.values) * rel_path_length(w, path);
}

namespace {

// Depth-first enumeration of simple paths from `from` with at most `cap`
// edges; calls visit(path, value) at every vertex reached.
template <class Visit>
void enumerate_paths(const Window& w, const Cochain<double>& m, double penalty,
                     Eigen::Index from, int cap, Visit&& visit) {
  const auto& ends = w.ends;
  std::vector<std::vector<EdgeStep>> adj(w.size(0));
  for (Eigen::Index e = 0; e < w.size(1); ++e) {
    adj[ends[e].first].push_back({e, 1});
    adj[ends[e].second].push_back({e, -1});
  }
  std::vector<bool> on_path(w.size(0), false);
  EdgePath path{from, {}};
  on_path[from] = true;
  auto dfs = [&](auto&& self, Eigen::Index v, double value) -> void {
    visit(path, v, value);
    if (static_cast<int>(path.steps.size()) == cap) return;
    for (const auto& s : adj[v]) {
      const Eigen::Index u = s.orientation > 0 ? ends[s.cell].second : ends[s.cell].first;
      if (on_path[u]) continue;
      on_path[u] = true;
      path.steps.push_back(s);
      self(self, u,
           value + s.orientation * m.values(s.cell) - penalty * edge_weight(w.cells[1][s.cell]));
      path.steps.pop_back();
      on_path[u] = false;
    }
  };
  dfs(dfs, from, 0.0);
}

}  // namespace

MaxNu windowed_max_nu(const Window& w, const Cochain<double>& m, const Cochain<double>& z,
                      double C, Eigen::Index from, Eigen::Index to, int cap) {
  if (from < 0 || from >= w.size(0) || to < 0 || to >= w.size(0))
    throw PreconditionError("endpoints are not window vertices");
  const double penalty = C * linf_norm(z.values);
  MaxNu best;
  bool found = false;
  enumerate_paths(w, m, penalty, from, cap, [&](const EdgePath& path, Eigen::Index v, double value) {
    if (v != to) return;
    ++best.paths_examined;
    if (!found || value > best.value) {
      found = true;
      best.value = value;
      best.path = path;
    }
  });
  if (!found)
    throw ResourceError("no path within " + std::to_string(cap) + " edges");
  return best;
}

std::vector<Eigen::Index> coset_representatives(const RelativePresentation& p,
                                                const GroupOracle& o, const Window& w) {
  std::vector<Eigen::Index> rep(w.size(0));
  std::map<int, std::vector<Eigen::Index>> chosen;  // per label, representatives so far
  for (Eigen::Index i = 0; i < w.size(0); ++i) {
    rep[i] = i;
    const CellId& c = w.cells[0][i];
    if (c.type != CellType::E0Lambda) continue;
    // Cells are sorted, so the first translate met in each coset is the least.
    for (Eigen::Index r : chosen[c.param]) {
      Word q = inverse(p, w.cells[0][r].translate) * c.translate;
      if (o.peripheral_element(p, c.param, q)) {
        rep[i] = r;
        break;
      }
    }
    if (rep[i] == i) chosen[c.param].push_back(i);
  }
  return rep;
}

CrucialSection crucial_section(const RelativePresentation& p, const GroupOracle& o,
                               const Window& w, const Cochain<double>& m,
                               const Cochain<double>& z, double C, int cap) {
  auto base = w.find({CellType::E0, Word{}, 0, {}, {}});
  if (!base) throw PreconditionError("window does not contain the identity vertex");
  const double penalty = C * linf_norm(z.values);
  std::vector<std::optional<double>> best(w.size(0));
  enumerate_paths(w, m, penalty, *base, cap, [&](const EdgePath&, Eigen::Index v, double value) {
    if (!best[v] || value > *best[v]) best[v] = value;
  });
  const auto rep = coset_representatives(p, o, w);
  CrucialSection out;
  out.d = zero_cochain<double>(w, 0);
  for (Eigen::Index i = 0; i < w.size(0); ++i) {
    const auto& b = best[rep[i]];
    if (!b) {
      ++out.unreachable;
      continue;
    }
    out.d.values(i) = *b;
  }
  auto dd = coboundary(w, out.d);
  out.k = Cochain<double>{1, dd.values - m.values};
  out.k_norm = linf_norm(out.k.values);
  out.relative = is_relative(w, out.k);
  return out;
}

std::string to_string(CellType t) {
  switch (t) {
    case CellType::E0:
      return "e0";
    case CellType::E0Lambda:
      return "e0_lambda";
    case CellType::E1X:
      return "e1_x";
    case CellType::E1Lambda:
      return "e1_lambda";
    case CellType::E1H:
      return "e1_h";
    case CellType::E2R:
      return "e2_R";
    case CellType::E2S:
      break;
  }
  return "e2_S";
}

json cell_to_json(const RelativePresentation& p, const CellId& c) {
  json j{{"type", to_string(c.type)}, {"translate", to_string(p, c.translate)}};
  switch (c.type) {
    case CellType::E1X:
      j["x"] = p.x_symbols()[c.param];
      break;
    case CellType::E2R:
      j["relator"] = c.param;
      break;
    case CellType::E0Lambda:
    case CellType::E1Lambda:
      j["lambda"] = c.param;
      break;
    case CellType::E1H:
      j["lambda"] = c.param;
      j["h"] = p.model(c.param).element_to_json(c.h);
      break;
    case CellType::E2S:
      j["lambda"] = c.param;
      j["h"] = p.model(c.param).element_to_json(c.h);
      j["h2"] = p.model(c.param).element_to_json(c.h2);
      break;
    case CellType::E0:
      break;
  }
  return j;
}

namespace {

json triplets(const Eigen::SparseMatrix<int>& a) {
  json t = json::array();
  for (Eigen::Index col = 0; col < a.outerSize(); ++col)
    for (Eigen::SparseMatrix<int>::InnerIterator it(a, col); it; ++it)
      t.push_back({it.row(), it.col(), it.value()});
  return json{{"rows", a.rows()}, {"cols", a.cols()}, {"triplets", t}};
}

}  // namespace

json window_to_json(const RelativePresentation& p, const Window& w) {
  json cells = json::object();
  for (int d = 0; d < 3; ++d) {
    json list = json::array();
    for (const auto& c : w.cells[d]) list.push_back(cell_to_json(p, c));
    cells[std::to_string(d)] = list;
  }
  return json{{"id", w.id},
              {"rho", w.rho},
              {"cells", cells},
              {"d1", triplets(w.d1)},
              {"d2", triplets(w.d2)},
              {"interior", w.interior},
              {"boundary_l1_bound", w.boundary_l1_bound}};
}

json lp_certificate_to_json(const RelativePresentation& p, const Window& w,
                            const LpCertificate<double>& cert) {
  json j{{"window", cert.window_id}, {"cocycle", cert.cocycle_id}};
  if (cert.status == LpCertificate<double>::Status::Infeasible) {
    j["status"] = "infeasible";
    json wit = json::array();
    for (const auto& [cell, y] : cert.witness)
      wit.push_back({{"cell", cell_to_json(p, w.cells[2][cell])}, {"multiplier", y}});
    j["witness"] = wit;
    return j;
  }
  j["status"] = "primitive";
  j["norm"] = cert.norm;
  json m = json::array();
  for (Eigen::Index i = 0; i < cert.m.values.size(); ++i)
    if (cert.m.values(i) != 0.0)
      m.push_back({{"cell", cell_to_json(p, w.cells[1][i])}, {"value", cert.m.values(i)}});
  j["m"] = m;
  return j;
}

}  // namespace relhyp
