#include "relhyp/corridor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "relhyp/errors.hpp"
#include "relhyp/integer_lattice.hpp"
#include "relhyp/loop_literal.hpp"
#include "relhyp/parallel.hpp"

namespace relhyp {

bool is_reduced(const FnWord& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) return false;
    if (i > 0 && a[i] == -a[i - 1]) return false;
  }
  return true;
}

FnWord fn_reduce(const FnWord& a) {
  FnWord out;
  for (int l : a) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

FnWord fn_inverse(const FnWord& a) {
  FnWord out(a.rbegin(), a.rend());
  for (int& l : out) l = -l;
  return out;
}

FnWord fn_concat(const FnWord& a, const FnWord& b) {
  FnWord out = a;
  out.insert(out.end(), b.begin(), b.end());
  return fn_reduce(out);
}

std::vector<FnWord> fn_sphere(int rank, int len) {
  std::vector<int> letters;
  for (int i = 1; i <= rank; ++i) {
    letters.push_back(i);
    letters.push_back(-i);
  }
  std::vector<FnWord> out;
  FnWord cur;
  auto grow = [&](auto&& self) -> void {
    if (static_cast<int>(cur.size()) == len) {
      out.push_back(cur);
      return;
    }
    for (int l : letters) {
      if (!cur.empty() && cur.back() == -l) continue;
      cur.push_back(l);
      self(self);
      cur.pop_back();
    }
  };
  if (len >= 0) grow(grow);
  return out;
}

std::string fn_to_string(const FnWord& a) {
  if (a.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) out += ' ';
    out += 'a' + std::to_string(std::abs(a[i]));
    if (a[i] < 0) out += "^-1";
  }
  return out;
}

FnWord fn_from_string(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string tok;
  FnWord out;
  while (in >> tok) {
    if (tok == "1") continue;
    if (tok.size() < 2 || tok[0] != 'a') throw ParseError("bad F_n letter '" + tok + "'");
    int sign = 1;
    std::string num = tok.substr(1);
    if (auto pos = num.find('^'); pos != std::string::npos) {
      auto exp = num.substr(pos + 1);
      num = num.substr(0, pos);
      if (exp == "-1")
        sign = -1;
      else if (exp != "1")
        throw ParseError("bad F_n exponent in '" + tok + "'");
    }
    int i = 0;
    try {
      i = std::stoi(num);
    } catch (const std::exception&) {
      throw ParseError("bad F_n letter '" + tok + "'");
    }
    if (i < 1) throw ParseError("F_n letters are numbered from 1");
    out.push_back(sign * i);
  }
  return out;
}

FreeAction identity_action(int basis) {
  FreeAction a;
  a.basis = basis;
  a.automorphisms.resize(basis);
  return a;
}

namespace {

ModelElement power(const PeripheralModel& m, const ModelElement& e, std::int64_t k) {
  ModelElement base = k < 0 ? m.inverse(e) : e;
  ModelElement acc = m.identity();
  for (std::int64_t i = 0; i < std::llabs(k); ++i) acc = m.product(acc, base);
  return acc;
}

int target_label(const RelMap& m, int label) {
  auto it = m.sigma.find(label);
  return it == m.sigma.end() ? label : it->second;
}

// iota(h) in the target model.
ModelElement peripheral_image(const RelativePresentation& p, const RelMap& map, int label,
                              const ModelElement& h) {
  const auto& src = p.model(label);
  const int tgt_label = target_label(map, label);
  auto it = map.peripheral.find(label);
  if (it == map.peripheral.end()) {
    if (tgt_label != label)
      throw PreconditionError("no peripheral map for model " + std::to_string(label));
    return h;
  }
  const auto& tgt = p.model(tgt_label);
  const auto& img = it->second;
  switch (src.kind()) {
    case ModelKind::FreeAbelian: {
      ModelElement acc = tgt.identity();
      for (int j = 0; j < src.rank(); ++j) acc = tgt.product(acc, power(tgt, img.at(j), h.value[j]));
      return acc;
    }
    case ModelKind::FreeGroup: {
      ModelElement acc = tgt.identity();
      for (auto g : h.value) {
        const auto& e = img.at(std::llabs(g) - 1);
        acc = tgt.product(acc, g > 0 ? e : tgt.inverse(e));
      }
      return acc;
    }
    case ModelKind::FiniteTable:
      break;
  }
  return img.at(h.value[0]);
}

Word conjugator(const RelMap& m, int label) {
  auto it = m.conjugators.find(label);
  return it == m.conjugators.end() ? Word{} : it->second;
}

}  // namespace

Word apply_map(const RelativePresentation& p, const RelMap& m, const Word& w) {
  Word out;
  for (const auto& l : w.letters) {
    Word img;
    if (!l.is_h) {
      auto it = m.x_images.find(l.index);
      img = it == m.x_images.end() ? Word{Letter::x(l.index, 1)} : it->second;
      if (l.sign < 0) img = inverse(p, img);
    } else {
      const int tgt = target_label(m, l.index);
      auto e = peripheral_image(p, m, l.index, l.elem);
      if (!p.model(tgt).is_identity(e)) {
        const Word g = conjugator(m, l.index);
        img = inverse(p, g) * Word{Letter::h(tgt, e)} * g;
      }
    }
    out.letters.insert(out.letters.end(), img.letters.begin(), img.letters.end());
  }
  return free_reduce(p, out);
}

Word apply(const RelativePresentation& p, const FreeAction& action, const FnWord& a,
           const Word& w) {
  if (!is_reduced(a)) throw PreconditionError("F_n word " + fn_to_string(a) + " is not reduced");
  Word out = free_reduce(p, w);
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    const int i = std::abs(*it) - 1;
    if (i >= action.basis) throw PreconditionError("F_n letter outside the basis");
    const auto& alpha = action.automorphisms[i];
    out = apply_map(p, *it > 0 ? alpha.forward : alpha.inverse, out);
  }
  return out;
}

namespace {

// Every generator of G as a one-letter word: X symbols, then model generators.
std::vector<Word> generator_words(const RelativePresentation& p) {
  std::vector<Word> out;
  for (std::size_t s = 0; s < p.x_symbols().size(); ++s)
    out.push_back(Word{Letter::x(static_cast<int>(s), 1)});
  for (const auto& m : p.models())
    for (auto& g : m.generators()) out.push_back(Word{Letter::h(m.label(), g)});
  return out;
}

void check_structure(const RelativePresentation& p, const RelMap& map, const std::string& name,
                     ValidationReport& report) {
  auto fail = [&](const std::string& why) {
    report.ok = false;
    report.failures.push_back(name + ": " + why);
  };
  std::vector<int> targets;
  for (const auto& m : p.models()) {
    const int t = target_label(map, m.label());
    if (!p.has_model(t)) {
      fail("sigma sends " + std::to_string(m.label()) + " to an unknown label");
      return;
    }
    targets.push_back(t);
    const auto& tm = p.model(t);
    if (tm.kind() != m.kind() || tm.rank() != m.rank()) {
      fail("sigma pairs models " + std::to_string(m.label()) + " and " + std::to_string(t) +
           " of different type");
      continue;
    }
    auto it = map.peripheral.find(m.label());
    if (it == map.peripheral.end()) {
      if (t != m.label()) fail("missing peripheral map for model " + std::to_string(m.label()));
      continue;
    }
    const auto& img = it->second;
    const std::size_t need = m.is_finite() ? m.order() : m.rank();
    if (img.size() != need) {
      fail("peripheral map for model " + std::to_string(m.label()) + " has " +
           std::to_string(img.size()) + " images, expected " + std::to_string(need));
      continue;
    }
    try {
      for (const auto& e : img) tm.check_element(e);
    } catch (const ParseError& e) {
      fail(e.what());
      continue;
    }
    if (m.is_finite()) {
      std::vector<bool> hit(m.order(), false);
      for (const auto& e : img) hit[e.value[0]] = true;
      bool hom = true;
      for (int a = 0; a < m.order() && hom; ++a)
        for (int b = 0; b < m.order() && hom; ++b)
          hom = img[m.table()[a][b]] == tm.product(img[a], img[b]);
      if (!hom || std::find(hit.begin(), hit.end(), false) != hit.end())
        fail("peripheral map for model " + std::to_string(m.label()) + " is not an isomorphism");
    } else if (m.kind() == ModelKind::FreeAbelian) {
      std::vector<IntVector> vecs;
      for (const auto& e : img) vecs.push_back(e.value);
      IntegerLattice lat(m.rank(), vecs);
      for (int i = 0; i < m.rank(); ++i) {
        IntVector ei(m.rank(), 0);
        ei[i] = 1;
        if (!lat.contains(ei)) {
          fail("peripheral map for model " + std::to_string(m.label()) +
               " is not invertible over Z");
          break;
        }
      }
    }
  }
  std::sort(targets.begin(), targets.end());
  if (std::adjacent_find(targets.begin(), targets.end()) != targets.end())
    fail("sigma is not a permutation");
}

}  // namespace

ValidationReport validate_relaut(const RelativePresentation& p, const GroupOracle& o,
                                 const RelAutomorphism& alpha) {
  ValidationReport report;
  check_structure(p, alpha.forward, "alpha", report);
  check_structure(p, alpha.inverse, "inverse", report);
  if (!report.ok) return report;

  auto fail = [&](const std::string& why, const Word& gen) {
    if (report.ok) report.witness = to_string(p, gen);
    report.ok = false;
    report.failures.push_back(why + " at " + to_string(p, gen));
  };
  for (std::size_t r = 0; r < p.relators().size(); ++r) {
    if (!o.normal_form(p, apply_map(p, alpha.forward, p.relators()[r])).empty())
      fail("alpha does not kill relator " + std::to_string(r), p.relators()[r]);
    if (!o.normal_form(p, apply_map(p, alpha.inverse, p.relators()[r])).empty())
      fail("inverse does not kill relator " + std::to_string(r), p.relators()[r]);
  }
  const auto gens = generator_words(p);
  for (const auto& g : gens)
    if (!equal(p, o, apply_map(p, alpha.forward, apply_map(p, alpha.inverse, g)), g))
      fail("alpha o inverse moves a generator", g);
  for (const auto& g : gens)
    if (!equal(p, o, apply_map(p, alpha.inverse, apply_map(p, alpha.forward, g)), g))
      fail("inverse o alpha moves a generator", g);
  return report;
}

const CorridorEntry* Corridor::find(const FnWord& a) const {
  for (const auto& e : entries)
    if (e.a == a) return &e;
  return nullptr;
}

Corridor build_corridor(const RelativePresentation& p, const GroupOracle& o,
                        const FreeAction& action, const Word& g, int N,
                        const LengthOptions& opts) {
  Corridor c;
  c.g = g;
  c.N = N;
  for (int len = 0; len <= N; ++len)
    for (auto& a : fn_sphere(action.basis, len)) c.entries.push_back({a, {}, {}});
  parallel_for(c.entries.size(), [&](std::size_t i) {
    auto& e = c.entries[i];
    e.image = apply(p, action, fn_inverse(e.a), g);
    e.length = rel_length(p, o, e.image, opts);
  });
  return c;
}

namespace {

constexpr double kTol = 1e-9;

enum class Compare { Holds, Fails, Unknown };

// lambda * base <= max(x, y), respecting bounds.
Compare stretch(double lambda, const RelLength& base, const RelLength& x, const RelLength& y) {
  if (lambda * base.upper <= std::max(x.lower, y.lower) + kTol) return Compare::Holds;
  if (lambda * base.lower > std::max(x.upper, y.upper) + kTol) return Compare::Fails;
  return Compare::Unknown;
}

// Unordered pairs of sphere words whose first letters differ.
std::vector<std::pair<FnWord, FnWord>> opposite_pairs(int rank, int N) {
  auto sphere = fn_sphere(rank, N);
  std::vector<std::pair<FnWord, FnWord>> out;
  for (std::size_t i = 0; i < sphere.size(); ++i)
    for (std::size_t j = i + 1; j < sphere.size(); ++j)
      if (sphere[i].front() != sphere[j].front()) out.emplace_back(sphere[i], sphere[j]);
  return out;
}

struct PerSample {
  std::size_t pairs = 0, indeterminate = 0, violations = 0;
  std::vector<Violation> kept;
};

SeparationReport merge(std::vector<PerSample>& parts, double lambda, int N, int M,
                       std::size_t max_violations) {
  SeparationReport r;
  r.lambda = lambda;
  r.N = N;
  r.M = M;
  r.samples = parts.size();
  for (auto& s : parts) {
    r.pairs_checked += s.pairs;
    r.indeterminate += s.indeterminate;
    r.violation_count += s.violations;
    for (auto& v : s.kept)
      if (r.violations.size() < max_violations) r.violations.push_back(std::move(v));
  }
  r.verdict = r.violation_count > 0 ? SeparationVerdict::Violated
              : r.indeterminate > 0 ? SeparationVerdict::Indeterminate
                                    : SeparationVerdict::Separated;
  return r;
}

}  // namespace

SeparationReport check_separated(const RelativePresentation& p, const GroupOracle& o,
                                 const FreeAction& action, const std::vector<Word>& sample,
                                 double lambda, int N, int M, const SeparationOptions& opts) {
  if (!(lambda > 1) || N < 1 || M < 1)
    throw PreconditionError("separation needs lambda > 1 and N, M >= 1");
  std::vector<FnWord> centers;
  for (int len = 0; len <= opts.center_radius; ++len)
    for (auto& w : fn_sphere(action.basis, len)) centers.push_back(std::move(w));
  const auto pairs = opposite_pairs(action.basis, N);

  std::vector<PerSample> parts(sample.size());
  parallel_for(sample.size(), [&](std::size_t i) {
    const Word& g = sample[i];
    std::map<FnWord, RelLength> cache;
    auto gamma = [&](const FnWord& a) {
      auto it = cache.find(a);
      if (it != cache.end()) return it->second;
      auto l = rel_length(p, o, apply(p, action, fn_inverse(a), g), opts.lengths);
      cache.emplace(a, l);
      return l;
    };
    auto& out = parts[i];
    for (const auto& w : centers) {
      const RelLength lw = gamma(w);
      if (lw.upper < M) continue;
      if (lw.lower < M) {
        ++out.indeterminate;
        continue;
      }
      for (const auto& [du, dv] : pairs) {
        const FnWord u = fn_concat(w, du), v = fn_concat(w, dv);
        const RelLength lu = gamma(u), lv = gamma(v);
        ++out.pairs;
        switch (stretch(lambda, lw, lu, lv)) {
          case Compare::Holds:
            break;
          case Compare::Unknown:
            ++out.indeterminate;
            break;
          case Compare::Fails:
            ++out.violations;
            if (out.kept.size() < opts.max_violations) out.kept.push_back({g, w, u, v, lw, lu, lv});
            break;
        }
      }
    }
  });
  return merge(parts, lambda, N, M, opts.max_violations);
}

SeparationReport check_uniform_flare(const RelativePresentation& p, const GroupOracle& o,
                                     const FreeAction& action, const std::vector<Word>& sample,
                                     double lambda, int N, int M, const SeparationOptions& opts) {
  if (!(lambda > 1) || N < 1 || M < 1)
    throw PreconditionError("flare needs lambda > 1 and N, M >= 1");
  const auto pairs = opposite_pairs(action.basis, N);
  std::vector<PerSample> parts(sample.size());
  parallel_for(sample.size(), [&](std::size_t i) {
    const Word& g = sample[i];
    auto& out = parts[i];
    const RelLength lg = rel_length(p, o, g, opts.lengths);
    if (lg.upper < M) return;
    if (lg.lower < M) {
      ++out.indeterminate;
      return;
    }
    std::map<FnWord, RelLength> cache;
    auto image_length = [&](const FnWord& a) {
      auto it = cache.find(a);
      if (it != cache.end()) return it->second;
      auto l = rel_length(p, o, apply(p, action, a, g), opts.lengths);
      cache.emplace(a, l);
      return l;
    };
    for (const auto& [a, b] : pairs) {
      const RelLength la = image_length(a), lb = image_length(b);
      ++out.pairs;
      switch (stretch(lambda, lg, la, lb)) {
        case Compare::Holds:
          break;
        case Compare::Unknown:
          ++out.indeterminate;
          break;
        case Compare::Fails:
          ++out.violations;
          if (out.kept.size() < opts.max_violations) out.kept.push_back({g, {}, a, b, lg, la, lb});
          break;
      }
    }
  });
  return merge(parts, lambda, N, M, opts.max_violations);
}

namespace {

// Relative distance from the base vertex to q.e0_lambda: half an edge plus the
// shortest element of the coset q H_lambda among q, q s^-1 (s the trailing
// lambda-syllable of q) and the identity when q lies in H_lambda. Exact for
// free products.
std::optional<double> coset_distance(const RelativePresentation& p, const GroupOracle& o,
                                     const Word& q, int label, const LengthOptions& opts) {
  if (o.peripheral_element(p, label, q)) return 0.5;
  auto lq = rel_length(p, o, q, opts);
  if (!lq.is_exact()) return std::nullopt;
  double best = lq.value();
  Word nf = o.normal_form(p, q);
  if (!nf.empty() && nf.letters.back().is_h && nf.letters.back().index == label) {
    Word trimmed = nf;
    trimmed.letters.pop_back();
    auto lt = rel_length(p, o, trimmed, opts);
    if (!lt.is_exact()) return std::nullopt;
    best = std::min<double>(best, lt.value());
  }
  return 0.5 + best;
}

}  // namespace

PairingResult corridor_cocycle_pairing(const RelativePresentation& p, const GroupOracle& o,
                                       const FreeAction& action, const Word& g,
                                       const FnWord& u, const FnWord& v,
                                       const LengthOptions& opts) {
  if (!is_reduced(u) || !is_reduced(v)) throw PreconditionError("u and v must be reduced");
  PairingResult r;
  std::size_t common = 0;
  while (common < u.size() && common < v.size() && u[common] == v[common]) ++common;
  for (std::size_t k = u.size(); k > common; --k) r.path.emplace_back(u.begin(), u.begin() + k);
  for (std::size_t k = common; k <= v.size(); ++k) r.path.emplace_back(v.begin(), v.begin() + k);

  auto indeterminate = [&] {
    r.status = PairingResult::Status::Indeterminate;
    return r;
  };
  for (std::size_t i = 0; i + 1 < r.path.size(); ++i) {
    const Word image = apply(p, action, fn_inverse(r.path[i]), g);
    auto len = rel_length_search(p, o, image, opts);
    if (!len.length.is_exact()) return indeterminate();
    r.rhs += len.length.value();

    // Walk a geodesic spelling of the image through the 1-skeleton, summing
    // the distance increments edge by edge.
    Word here;
    double d_here = 0;
    for (const auto& l : len.witness.letters) {
      Word next = o.normal_form(p, here * Word{l});
      auto ln = rel_length(p, o, next, opts);
      if (!ln.is_exact()) return indeterminate();
      const double d_next = ln.value();
      if (!l.is_h) {
        r.lhs += d_next - d_here;
      } else {
        auto mid_a = coset_distance(p, o, here, l.index, opts);
        auto mid_b = coset_distance(p, o, next, l.index, opts);
        if (!mid_a || !mid_b) return indeterminate();
        r.lhs += (*mid_a - d_here) + (*mid_b - *mid_a) + (d_next - *mid_b);
      }
      here = std::move(next);
      d_here = d_next;
    }
  }
  r.status = std::abs(r.lhs - r.rhs) <= kTol ? PairingResult::Status::Equal
                                             : PairingResult::Status::Unequal;
  return r;
}

SideReport side_report(const Corridor& corridor, double lambda_plus) {
  SideReport rep;
  const auto* base = corridor.find({});
  if (!base) return rep;
  const double floor_value = base->length.upper / lambda_plus;
  const int rank = [&] {
    int r = 0;
    for (const auto& e : corridor.entries)
      for (int l : e.a) r = std::max(r, std::abs(l));
    return r;
  }();
  auto side_holds = [&](const FnWord& a) {
    for (std::size_t k = 1; k <= a.size(); ++k) {
      const auto* e = corridor.find(FnWord(a.begin(), a.begin() + k));
      if (!e || e->length.lower < floor_value - kTol) return false;
    }
    return true;
  };
  for (const auto& [a, b] : opposite_pairs(rank, corridor.N)) {
    SideReport::Row row{a, b, side_holds(a), side_holds(b)};
    if (!row.a_side_holds && !row.b_side_holds) rep.all_hold = false;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

bool in_fn_extension(const RelativePresentation& p, const GroupOracle& o,
                     const FreeAction& action, int label, const Word& g, const FnWord& a) {
  const auto& m = p.model(label);
  const Word gi = inverse(p, g);
  for (const auto& h : m.generators()) {
    const Word hw{Letter::h(label, h)};
    if (!o.peripheral_element(p, label, g * apply(p, action, a, hw) * gi)) return false;
    if (!o.peripheral_element(p, label, apply(p, action, fn_inverse(a), gi * hw * g)))
      return false;
  }
  return true;
}

std::vector<int> orbit_representatives(const RelativePresentation& p, const FreeAction& action) {
  std::map<int, int> parent;
  for (const auto& m : p.models()) parent[m.label()] = m.label();
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& alpha : action.automorphisms)
    for (const auto& m : p.models()) {
      int a = find(m.label()), b = find(target_label(alpha.forward, m.label()));
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::vector<int> reps;
  for (const auto& [label, _] : parent)
    if (find(label) == label) reps.push_back(label);
  return reps;
}

namespace {

Word word_field(const RelativePresentation& p, const json& j) {
  if (j.is_string()) return parse_loop_literal(p, j.get<std::string>());
  return word_from_json(p, j);
}

int label_key(const std::string& key) {
  try {
    return std::stoi(key);
  } catch (const std::exception&) {
    throw ParseError("'" + key + "' is not a model label");
  }
}

RelMap map_from_json(const RelativePresentation& p, const json& j) {
  if (!j.is_object()) throw ParseError("automorphism entry must be an object");
  RelMap m;
  if (j.contains("x"))
    for (const auto& [sym, img] : j["x"].items()) {
      auto id = p.symbol_id(sym);
      if (!id) throw ParseError("unknown generator '" + sym + "' in action");
      m.x_images[*id] = word_field(p, img);
    }
  if (j.contains("sigma"))
    for (const auto& [key, val] : j["sigma"].items()) {
      const int t = val.get<int>();
      if (!p.has_model(t)) throw ParseError("sigma names unknown label " + std::to_string(t));
      m.sigma[label_key(key)] = t;
    }
  if (j.contains("peripheral"))
    for (const auto& [key, vals] : j["peripheral"].items()) {
      const int label = label_key(key);
      if (!p.has_model(label)) throw ParseError("unknown model label " + key);
      const auto& tgt = p.model(target_label(m, label));
      std::vector<ModelElement> imgs;
      for (const auto& v : vals) imgs.push_back(tgt.element_from_json(v));
      m.peripheral[label] = std::move(imgs);
    }
  if (j.contains("conjugators"))
    for (const auto& [key, w] : j["conjugators"].items()) {
      const int label = label_key(key);
      if (!p.has_model(label)) throw ParseError("unknown model label " + key);
      m.conjugators[label] = word_field(p, w);
    }
  return m;
}

json map_to_json(const RelativePresentation& p, const RelMap& m) {
  json j = json::object();
  json x = json::object();
  for (const auto& [s, w] : m.x_images) x[p.x_symbols()[s]] = to_string(p, w);
  j["x"] = x;
  json sigma = json::object();
  for (const auto& [a, b] : m.sigma) sigma[std::to_string(a)] = b;
  j["sigma"] = sigma;
  json per = json::object();
  for (const auto& [label, imgs] : m.peripheral) {
    const auto& tgt = p.model(target_label(m, label));
    json arr = json::array();
    for (const auto& e : imgs) arr.push_back(tgt.element_to_json(e));
    per[std::to_string(label)] = arr;
  }
  j["peripheral"] = per;
  json conj = json::object();
  for (const auto& [label, w] : m.conjugators) conj[std::to_string(label)] = to_string(p, w);
  j["conjugators"] = conj;
  return j;
}

}  // namespace

FreeAction action_from_json(const RelativePresentation& p, const json& j) {
  try {
    if (!j.is_object() || !j.contains("basis") || !j["basis"].is_number_integer())
      throw ParseError("action needs an integer \"basis\"");
    FreeAction a;
    a.basis = j["basis"].get<int>();
    if (a.basis < 1) throw ParseError("action basis must be positive");
    if (!j.contains("automorphisms") || !j["automorphisms"].is_array() ||
        static_cast<int>(j["automorphisms"].size()) != a.basis)
      throw ParseError("action needs one automorphism per basis letter");
    for (const auto& entry : j["automorphisms"]) {
      if (!entry.contains("inverse"))
        throw ParseError("every automorphism must come with an explicit \"inverse\"");
      a.automorphisms.push_back({map_from_json(p, entry), map_from_json(p, entry["inverse"])});
    }
    return a;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed action: ") + e.what());
  }
}

json action_to_json(const RelativePresentation& p, const FreeAction& action) {
  json autos = json::array();
  for (const auto& alpha : action.automorphisms) {
    json j = map_to_json(p, alpha.forward);
    j["inverse"] = map_to_json(p, alpha.inverse);
    autos.push_back(j);
  }
  return json{{"basis", action.basis}, {"automorphisms", autos}};
}

FreeAction parse_action(const RelativePresentation& p, std::string_view text) {
  return action_from_json(p, parse_json_text(text));
}

std::string to_string(SeparationVerdict v) {
  switch (v) {
    case SeparationVerdict::Separated:
      return "separated";
    case SeparationVerdict::Violated:
      return "violated";
    case SeparationVerdict::Indeterminate:
      break;
  }
  return "indeterminate";
}

json corridor_to_json(const RelativePresentation& p, const Corridor& c) {
  json entries = json::array();
  for (const auto& e : c.entries)
    entries.push_back({{"a", fn_to_string(e.a)},
                       {"image", to_string(p, e.image)},
                       {"length", rel_length_to_json(e.length)}});
  return json{{"g", to_string(p, c.g)}, {"N", c.N}, {"entries", entries}};
}

json separation_to_json(const RelativePresentation& p, const SeparationReport& r) {
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back({{"g", to_string(p, x.g)},
                 {"w", fn_to_string(x.w)},
                 {"u", fn_to_string(x.u)},
                 {"v", fn_to_string(x.v)},
                 {"lengths",
                  {rel_length_to_json(x.lw), rel_length_to_json(x.lu), rel_length_to_json(x.lv)}}});
  return json{{"lambda", r.lambda},
              {"N", r.N},
              {"M", r.M},
              {"verdict", to_string(r.verdict)},
              {"exhaustive", r.exhaustive},
              {"samples", r.samples},
              {"pairs_checked", r.pairs_checked},
              {"indeterminate", r.indeterminate},
              {"violation_count", r.violation_count},
              {"violations", v}};
}

json pairing_to_json(const PairingResult& r) {
  json path = json::array();
  for (const auto& w : r.path) path.push_back(fn_to_string(w));
  std::string status = r.status == PairingResult::Status::Equal     ? "equal"
                       : r.status == PairingResult::Status::Unequal ? "unequal"
                                                                    : "indeterminate";
  return json{{"lhs", r.lhs}, {"rhs", r.rhs}, {"status", status}, {"path", path}};
}

}  // namespace relhyp
