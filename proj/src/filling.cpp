#include "relhyp/filling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <sstream>
#include <unordered_map>

#include "relhyp/cayley.hpp"
#include "relhyp/errors.hpp"
#include "relhyp/integer_lattice.hpp"
#include "relhyp/parallel.hpp"

namespace relhyp {

namespace {

constexpr int kUnreachable = std::numeric_limits<int>::max() / 4;

// Abelianization of F restricted to its torsion-free part: one coordinate per
// X symbol, per Z^d coordinate and per F_k generator. Finite models vanish.
class AbelianImage {
 public:
  explicit AbelianImage(const RelativePresentation& p) : p_(p) {
    dim_ = static_cast<int>(p.x_symbols().size());
    for (const auto& m : p.models()) {
      offset_[m.label()] = dim_;
      if (!m.is_finite()) dim_ += m.rank();
    }
  }

  int dim() const { return dim_; }

  IntVector operator()(const Word& w) const {
    IntVector v(dim_, 0);
    for (const auto& l : w.letters) {
      if (!l.is_h) {
        v[l.index] += l.sign;
        continue;
      }
      const auto& m = p_.model(l.index);
      const int off = offset_.at(l.index);
      if (m.kind() == ModelKind::FreeAbelian) {
        for (int j = 0; j < m.rank(); ++j) v[off + j] += l.elem.value[j];
      } else if (m.kind() == ModelKind::FreeGroup) {
        for (auto g : l.elem.value) v[off + std::llabs(g) - 1] += g > 0 ? 1 : -1;
      }
    }
    return v;
  }

 private:
  const RelativePresentation& p_;
  int dim_ = 0;
  std::map<int, int> offset_;
};

// Lower bound on the number of relator cells still needed: each cell moves
// every abelian coordinate by at most the largest relator contribution, and
// the image must lie in the span of the relator images. Consistent, since one
// cell changes the bound by at most 1.
class AreaHeuristic {
 public:
  explicit AreaHeuristic(const RelativePresentation& p) : ab_(p) {
    max_abs_.assign(ab_.dim(), 0);
    std::vector<IntVector> gens;
    for (const auto& r : p.relators()) {
      auto v = ab_(r);
      for (int j = 0; j < ab_.dim(); ++j)
        max_abs_[j] = std::max<std::int64_t>(max_abs_[j], std::llabs(v[j]));
      gens.push_back(std::move(v));
    }
    lattice_ = std::make_unique<IntegerLattice>(ab_.dim(), std::move(gens));
  }

  int operator()(const Word& w) const {
    auto v = ab_(w);
    int h = 0;
    bool zero = true;
    for (int j = 0; j < ab_.dim(); ++j) {
      if (v[j] == 0) continue;
      zero = false;
      if (max_abs_[j] == 0) return kUnreachable;
      h = std::max<int>(h, static_cast<int>((std::llabs(v[j]) + max_abs_[j] - 1) / max_abs_[j]));
    }
    if (!zero && !lattice_->contains(v)) return kUnreachable;
    return h;
  }

 private:
  AbelianImage ab_;
  IntVector max_abs_;
  std::unique_ptr<IntegerLattice> lattice_;
};

Word rotated(const Word& r, int k) {
  Word out;
  out.letters.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) out.letters.push_back(r[(i + k) % r.size()]);
  return out;
}

}  // namespace

Word apply_rcell(const RelativePresentation& p, const Word& w, const FillingMove& m) {
  if (m.relator < 0 || m.relator >= static_cast<int>(p.relators().size()))
    throw PreconditionError("relator index out of range");
  Word r = p.relators()[m.relator];
  if (m.orientation < 0) r = inverse(p, r);
  if (m.rotation < 0 || m.rotation >= static_cast<int>(r.size()) || m.position < 0 ||
      m.position > static_cast<int>(w.size()))
    throw PreconditionError("cell move out of range");
  Word out;
  out.letters.reserve(w.size() + r.size());
  out.letters.insert(out.letters.end(), w.letters.begin(), w.letters.begin() + m.position);
  auto rot = rotated(r, m.rotation);
  out.letters.insert(out.letters.end(), rot.letters.begin(), rot.letters.end());
  out.letters.insert(out.letters.end(), w.letters.begin() + m.position, w.letters.end());
  return out;
}

bool replay(const RelativePresentation& p, const FillingCertificate& c) {
  Word w = c.loop;
  int cost = 0;
  try {
    for (const auto& m : c.trace) {
      if (m.kind == FillingMove::Kind::Reduce) {
        w = free_reduce(p, w);
      } else {
        w = free_reduce(p, apply_rcell(p, w, m));
        ++cost;
      }
      if (w != m.result) return false;
    }
  } catch (const PreconditionError&) {
    return false;
  }
  return w.empty() && cost == c.area;
}

FillingResult relative_area(const RelativePresentation& p, const GroupOracle* o,
                            const Word& c, const FillingCaps& caps) {
  if (o && !o->normal_form(p, c).empty())
    throw PreconditionError("loop " + to_string(p, c) + " is not trivial in G");

  FillingResult result;
  const AreaHeuristic heuristic(p);

  struct Node {
    Word w;
    int g;
    std::size_t parent;
    FillingMove move;
  };
  std::vector<Node> nodes;
  std::unordered_map<Word, int, WordHash> best;
  // (f, length, discovery order) keeps the search deterministic.
  using Key = std::tuple<int, std::size_t, std::size_t>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> open;

  Word start = free_reduce(p, c);
  FillingMove reduce_move;
  reduce_move.result = start;
  nodes.push_back({start, 0, 0, reduce_move});
  best[start] = 0;
  if (int h = heuristic(start); h <= caps.max_area) open.emplace(h, start.size(), 0);

  int pruned_min_f = kUnreachable;  // cheapest estimate cut by the length cap
  std::vector<Word> oriented;
  for (const auto& r : p.relators()) {
    oriented.push_back(r);
    oriented.push_back(inverse(p, r));
  }

  while (!open.empty()) {
    auto [f, len, id] = open.top();
    open.pop();
    const int g = nodes[id].g;
    if (best.at(nodes[id].w) < g) continue;
    if (nodes[id].w.empty()) {
      FillingCertificate cert;
      cert.loop = c;
      cert.area = g;
      for (std::size_t k = id; k != 0; k = nodes[k].parent) cert.trace.push_back(nodes[k].move);
      cert.trace.push_back(nodes[0].move);
      std::reverse(cert.trace.begin(), cert.trace.end());
      cert.minimal_within_cap = pruned_min_f >= g;
      result.certificate = std::move(cert);
      return result;
    }
    if (++result.states_expanded > caps.max_states) {
      result.reason = "state budget of " + std::to_string(caps.max_states) + " exhausted";
      return result;
    }
    if (g + 1 > caps.max_area) continue;
    const Word w = nodes[id].w;
    for (std::size_t ri = 0; ri < oriented.size(); ++ri) {
      const Word& r = oriented[ri];
      for (int rot = 0; rot < static_cast<int>(r.size()); ++rot) {
        for (int pos = 0; pos <= static_cast<int>(w.size()); ++pos) {
          FillingMove m;
          m.kind = FillingMove::Kind::RCell;
          m.relator = static_cast<int>(ri / 2);
          m.orientation = ri % 2 == 0 ? 1 : -1;
          m.rotation = rot;
          m.position = pos;
          Word next = free_reduce(p, apply_rcell(p, w, m));
          const int h = heuristic(next);
          if (h >= kUnreachable) continue;
          const int nf = g + 1 + h;
          if (next.size() > caps.max_len) {
            pruned_min_f = std::min(pruned_min_f, nf);
            continue;
          }
          if (nf > caps.max_area) continue;
          auto it = best.find(next);
          if (it != best.end() && it->second <= g + 1) continue;
          best[next] = g + 1;
          m.result = next;
          nodes.push_back({next, g + 1, id, m});
          open.emplace(nf, next.size(), nodes.size() - 1);
        }
      }
    }
  }
  result.reason = pruned_min_f < kUnreachable
                      ? "no filling within area " + std::to_string(caps.max_area) +
                            " and length " + std::to_string(caps.max_len)
                      : "no filling within area " + std::to_string(caps.max_area);
  return result;
}

json certificate_to_json(const RelativePresentation& p, const FillingCertificate& c) {
  json trace = json::array();
  for (const auto& m : c.trace) {
    if (m.kind == FillingMove::Kind::Reduce) {
      trace.push_back({{"move", "reduce"}, {"result", to_string(p, m.result)}});
    } else {
      trace.push_back({{"move", "rcell"},
                       {"relator", m.relator},
                       {"rotation", m.rotation},
                       {"position", m.position},
                       {"orientation", m.orientation},
                       {"result", to_string(p, m.result)}});
    }
  }
  return json{{"loop", to_string(p, c.loop)},
              {"area", c.area},
              {"minimal_within_cap", c.minimal_within_cap},
              {"trace", trace}};
}

const ProfileEntry& DehnProfile::at(int n) const {
  if (!covers(n))
    throw PreconditionError("profile does not cover n=" + std::to_string(n));
  return entries[n - 1];
}

namespace {

struct LoopAlphabet {
  std::vector<Letter> letters;
  std::vector<std::size_t> inverse_of;
};

LoopAlphabet loop_alphabet(const RelativePresentation& p, int rho) {
  LoopAlphabet a;
  a.letters = ball_alphabet(p, rho);
  for (const auto& l : a.letters) {
    auto inv = inverse(p, l);
    auto it = std::find(a.letters.begin(), a.letters.end(), inv);
    a.inverse_of.push_back(static_cast<std::size_t>(it - a.letters.begin()));
  }
  return a;
}

}  // namespace

DehnProfile dehn_profile(const RelativePresentation& p, const GroupOracle& o, int n_max,
                         int rho, const ProfileOptions& opts) {
  if (n_max < 1) throw PreconditionError("n_max must be at least 1");
  DehnProfile prof;
  prof.rho = rho;
  const auto alpha = loop_alphabet(p, rho);
  const std::size_t A = alpha.letters.size();

  // Number of words without adjacent inverse pairs: A (A-1)^(L-1) per length.
  double total = 0, per_len = static_cast<double>(A);
  for (int L = 1; L <= n_max; ++L) {
    total += per_len;
    per_len *= static_cast<double>(A > 0 ? A - 1 : 0);
  }
  prof.sampled = total > static_cast<double>(opts.max_loops);

  std::vector<Word> loops;  // trivial loops, grouped by nondecreasing length
  if (!prof.sampled) {
    std::vector<std::size_t> stack;
    Word w;
    // DFS over admissible words in lexicographic order.
    auto visit = [&](auto&& self, int depth) -> void {
      if (depth > 0 && o.normal_form(p, w).empty()) loops.push_back(w);
      if (depth == n_max) return;
      for (std::size_t k = 0; k < A; ++k) {
        if (!stack.empty() && alpha.inverse_of[stack.back()] == k) continue;
        stack.push_back(k);
        w.letters.push_back(alpha.letters[k]);
        self(self, depth + 1);
        w.letters.pop_back();
        stack.pop_back();
      }
    };
    visit(visit, 0);
    std::stable_sort(loops.begin(), loops.end(),
                     [](const Word& a, const Word& b) { return a.size() < b.size(); });
  } else if (A > 0) {
    std::mt19937_64 rng(opts.seed);
    const std::size_t per_length = std::max<std::size_t>(1, opts.max_loops / n_max);
    for (int L = 1; L <= n_max; ++L) {
      for (std::size_t s = 0; s < per_length; ++s) {
        Word w;
        std::size_t prev = A;
        for (int i = 0; i < L; ++i) {
          std::size_t k;
          do {
            k = std::uniform_int_distribution<std::size_t>(0, A - 1)(rng);
          } while (prev < A && alpha.inverse_of[prev] == k && A > 1);
          w.letters.push_back(alpha.letters[k]);
          prev = k;
        }
        if (o.normal_form(p, w).empty()) loops.push_back(std::move(w));
      }
    }
  }

  std::vector<FillingResult> areas(loops.size());
  parallel_for(loops.size(), [&](std::size_t i) {
    areas[i] = relative_area(p, nullptr, loops[i], opts.caps);
  });

  prof.entries.resize(n_max);
  for (int n = 1; n <= n_max; ++n) {
    prof.entries[n - 1].n = n;
    prof.entries[n - 1].exact = !prof.sampled;
  }
  for (std::size_t i = 0; i < loops.size(); ++i) {
    const int len = static_cast<int>(loops[i].size());
    for (int n = len; n <= n_max; ++n) {
      auto& e = prof.entries[n - 1];
      ++e.loop_count;
      if (!areas[i].certificate) {
        e.exact = false;
        continue;
      }
      if (!areas[i].certificate->minimal_within_cap) e.exact = false;
      if (e.witness.empty() || areas[i].certificate->area > e.max_area) {
        e.max_area = areas[i].certificate->area;
        e.witness = loops[i];
      }
    }
  }
  return prof;
}

std::vector<EscalationRow> rho_escalation(const RelativePresentation& p,
                                          const GroupOracle& o, int n,
                                          const std::vector<int>& rhos,
                                          const ProfileOptions& opts) {
  std::vector<EscalationRow> rows;
  for (int rho : rhos) rows.push_back({rho, dehn_profile(p, o, n, rho, opts).at(n)});
  return rows;
}

bool check_asymptotic_dominance(const DehnProfile& f, const DehnProfile& g, int C, int K,
                                double L, int lo, int hi) {
  for (int n = lo; n <= hi; ++n) {
    const int m = C * n + K;
    if (!f.covers(n) || !g.covers(m))
      throw PreconditionError("profile does not cover the index range");
    if (f.at(n).max_area > g.at(m).max_area + L * n) return false;
  }
  return true;
}

LinearFit linear_fit(const DehnProfile& profile, const std::vector<EscalationRow>& escalation) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& e : profile.entries)
    if (e.exact) pts.emplace_back(e.n, e.max_area);
  if (pts.size() < 3) throw PreconditionError("linear fit needs at least 3 exact entries");

  LinearFit fit;
  double mx = 0, my = 0;
  for (auto [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0, sxx = 0;
  for (auto [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  fit.slope = sxx > 0 ? sxy / sxx : 0;
  fit.intercept = my - fit.slope * mx;
  for (auto [x, y] : pts)
    fit.max_residual = std::max(fit.max_residual, std::abs(y - (fit.slope * x + fit.intercept)));

  const std::size_t half = pts.size() / 2;
  bool convex = pts.size() - half >= 4;
  for (std::size_t i = half + 2; i < pts.size() && convex; ++i)
    if (pts[i].second - 2 * pts[i - 1].second + pts[i - 2].second <= 0) convex = false;

  bool escalating = escalation.size() >= 2;
  for (std::size_t i = 1; i < escalation.size() && escalating; ++i)
    if (escalation[i].entry.max_area <= escalation[i - 1].entry.max_area) escalating = false;

  fit.verdict = convex || escalating ? GrowthVerdict::SuperlinearWitness
                                     : GrowthVerdict::LinearConsistent;
  return fit;
}

std::string to_string(GrowthVerdict v) {
  return v == GrowthVerdict::LinearConsistent ? "linear-consistent" : "superlinear-witness";
}

std::string profile_csv(const DehnProfile& profile) {
  std::ostringstream out;
  out << "n,max_area,exact,loop_count\n";
  for (const auto& e : profile.entries)
    out << e.n << ',' << e.max_area << ',' << (e.exact ? "true" : "false") << ','
        << e.loop_count << '\n';
  return out.str();
}

json profile_to_json(const RelativePresentation& p, const DehnProfile& profile) {
  json entries = json::array();
  for (const auto& e : profile.entries)
    entries.push_back({{"n", e.n},
                       {"max_area", e.max_area},
                       {"exact", e.exact},
                       {"loop_count", e.loop_count},
                       {"witness", to_string(p, e.witness)}});
  return json{{"rho", profile.rho}, {"sampled", profile.sampled}, {"entries", entries}};
}

}  // namespace relhyp
