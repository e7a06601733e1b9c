#include "relhyp/cayley.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "relhyp/errors.hpp"
#include "relhyp/parallel.hpp"

namespace relhyp {

std::optional<std::size_t> BallGraph::find(const Word& normal_form) const {
  auto it = index.find(normal_form);
  if (it == index.end()) return std::nullopt;
  return it->second;
}

std::vector<Letter> ball_alphabet(const RelativePresentation& p, int rho) {
  std::vector<Letter> out;
  for (std::size_t s = 0; s < p.x_symbols().size(); ++s) {
    out.push_back(Letter::x(static_cast<int>(s), 1));
    out.push_back(Letter::x(static_cast<int>(s), -1));
  }
  if (rho <= 0) return out;
  for (const auto& m : p.models())
    for (auto& e : m.elements_up_to_length(rho)) out.push_back(Letter::h(m.label(), e));
  return out;
}

BallGraph truncated_ball(const RelativePresentation& p, const GroupOracle& o,
                         int radius, int rho, std::size_t max_vertices) {
  if (radius < 0) throw PreconditionError("ball radius must be nonnegative");
  BallGraph b;
  b.radius = radius;
  b.peripheral_bound = rho;
  b.vertices.push_back(Word{});
  b.depth.push_back(0);
  b.index.emplace(Word{}, 0);
  const auto alphabet = ball_alphabet(p, rho);

  std::vector<std::size_t> frontier{0};
  for (int level = 0; level < radius && !frontier.empty(); ++level) {
    // Normal forms of the frontier's neighbours are independent of each other;
    // the merge below runs in frontier order so numbering is deterministic.
    std::vector<std::vector<Word>> next_forms(frontier.size());
    parallel_for(frontier.size(), [&](std::size_t i) {
      const Word& u = b.vertices[frontier[i]];
      std::vector<Word> products;
      products.reserve(alphabet.size());
      for (const auto& l : alphabet) products.push_back(u * Word{l});
      next_forms[i] = o.normal_forms(p, products);
    });
    std::vector<std::size_t> next;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      for (std::size_t k = 0; k < alphabet.size(); ++k) {
        Word& v = next_forms[i][k];
        auto [it, inserted] = b.index.emplace(v, b.vertices.size());
        if (inserted) {
          if (b.vertices.size() >= max_vertices)
            throw ResourceError("ball exceeds vertex budget of " +
                                std::to_string(max_vertices));
          b.vertices.push_back(std::move(v));
          b.depth.push_back(level + 1);
          next.push_back(it->second);
        }
        b.edges.push_back({frontier[i], alphabet[k], it->second});
      }
    }
    frontier = std::move(next);
  }
  return b;
}

namespace {

// Candidate letters for geodesic search at truncation rho.
std::vector<Letter> candidate_letters(const RelativePresentation& p, const Word& target,
                                      const LengthOptions& opts, int rho) {
  std::set<Letter> h_letters;
  for (const auto& m : p.models()) {
    int bound = m.is_finite() ? m.order() : rho;
    for (auto& e : m.elements_up_to_length(bound)) h_letters.insert(Letter::h(m.label(), e));
  }
  auto add_syllables = [&](const Word& w) {
    for (const auto& l : w.letters)
      if (l.is_h) {
        h_letters.insert(l);
        h_letters.insert(inverse(p, l));
      }
  };
  for (const auto& r : p.relators()) add_syllables(r);
  add_syllables(target);

  for (int round = 0; round < opts.closure_depth; ++round) {
    std::vector<Letter> current(h_letters.begin(), h_letters.end());
    for (const auto& a : current)
      for (const auto& b : current) {
        if (a.index != b.index) continue;
        const auto& m = p.model(a.index);
        auto e = m.product(a.elem, b.elem);
        if (!m.is_identity(e)) h_letters.insert(Letter::h(a.index, std::move(e)));
      }
  }
  std::vector<Letter> out;
  for (std::size_t s = 0; s < p.x_symbols().size(); ++s) {
    out.push_back(Letter::x(static_cast<int>(s), 1));
    out.push_back(Letter::x(static_cast<int>(s), -1));
  }
  out.insert(out.end(), h_letters.begin(), h_letters.end());
  return out;
}

struct SearchOutcome {
  std::optional<Word> found;  // a representative shorter than the limit
  bool complete = true;       // false when the state budget cut the search
};

// BFS over normal forms looking for a representative of `target` with fewer
// than `limit` letters.
SearchOutcome shorter_representative(const RelativePresentation& p, const GroupOracle& o,
                                     const Word& target, const std::vector<Letter>& alphabet,
                                     int limit, std::size_t max_states) {
  SearchOutcome out;
  std::unordered_map<Word, Word, WordHash> seen;  // normal form -> spelling
  seen.emplace(Word{}, Word{});
  std::vector<Word> frontier{Word{}};
  for (int depth = 1; depth < limit && !frontier.empty(); ++depth) {
    std::vector<Word> next;
    for (const auto& u : frontier) {
      std::vector<Word> products;
      products.reserve(alphabet.size());
      for (const auto& l : alphabet) products.push_back(u * Word{l});
      auto forms = o.normal_forms(p, products);
      const Word& spelling = seen.at(u);
      for (std::size_t k = 0; k < forms.size(); ++k) {
        if (seen.count(forms[k])) continue;
        Word w = spelling * Word{alphabet[k]};
        if (forms[k] == target) {
          out.found = std::move(w);
          return out;
        }
        if (seen.size() >= max_states) {
          out.complete = false;
          return out;
        }
        seen.emplace(forms[k], std::move(w));
        next.push_back(std::move(forms[k]));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

LengthResult rel_length_search(const RelativePresentation& p, const GroupOracle& o,
                               const Word& w, const LengthOptions& opts) {
  LengthResult r;
  Word nf = o.normal_form(p, w);
  if (nf.empty()) return {RelLength::exact(0), {}, 0};
  if (o.kind() == OracleKind::FreeProduct || nf.size() == 1)
    return {RelLength::exact(static_cast<int>(nf.size())), nf, 0};

  for (const auto& m : p.models())
    if (auto e = o.peripheral_element(p, m.label(), nf); e && !m.is_identity(*e))
      return {RelLength::exact(1), Word{Letter::h(m.label(), *e)}, 0};
  for (std::size_t s = 0; s < p.x_symbols().size(); ++s)
    for (int sign : {1, -1}) {
      Word x{Letter::x(static_cast<int>(s), sign)};
      if (o.normal_form(p, x) == nf) return {RelLength::exact(1), x, 0};
    }

  // Membership answers from plugins are heuristic, so only the other oracles
  // certify that no single letter suffices.
  const int lower = o.kind() == OracleKind::Plugin ? 1 : 2;
  r.length = RelLength::bounds(lower, static_cast<int>(nf.size()));
  r.witness = nf;
  const bool finite_alphabet = o.has_finite_alphabet(p);
  for (int rho = std::max(1, opts.rho);; rho *= 2) {
    r.rho = rho;
    auto alphabet = candidate_letters(p, nf, opts, rho);
    auto found = shorter_representative(p, o, nf, alphabet, r.length.upper, opts.max_states);
    if (found.found) {
      r.witness = *found.found;
      r.length.upper = static_cast<int>(r.witness.size());
      // BFS returns the first hit, so within this alphabet nothing is shorter.
      if (finite_alphabet && found.complete) r.length.lower = r.length.upper;
    } else if (finite_alphabet && found.complete) {
      r.length.lower = r.length.upper;
    }
    if (r.length.is_exact() || finite_alphabet || rho * 2 > opts.max_rho) break;
  }
  return r;
}

RelLength rel_length(const RelativePresentation& p, const GroupOracle& o, const Word& w,
                     const LengthOptions& opts) {
  return rel_length_search(p, o, w, opts).length;
}

Word geodesic_witness(const RelativePresentation& p, const GroupOracle& o, const Word& w,
                      const LengthOptions& opts) {
  auto r = rel_length_search(p, o, w, opts);
  if (!r.length.is_exact())
    throw ResourceError("no certified geodesic under truncation rho=" +
                        std::to_string(r.rho) + " (length in [" +
                        std::to_string(r.length.lower) + ", " +
                        std::to_string(r.length.upper) + "])");
  return r.witness;
}

json rel_length_to_json(const RelLength& l) {
  if (l.is_exact()) return json{{"exact", true}, {"value", l.value()}};
  return json{{"exact", false}, {"lower", l.lower}, {"upper", l.upper}};
}

std::string ball_edges_csv(const RelativePresentation& p, const BallGraph& b) {
  std::ostringstream out;
  out << "source,letter,target\n";
  for (const auto& e : b.edges)
    out << e.source << ',' << to_string(p, e.letter) << ',' << e.target << '\n';
  return out.str();
}

json ball_to_json(const RelativePresentation& p, const BallGraph& b) {
  json vertices = json::array();
  for (std::size_t i = 0; i < b.vertices.size(); ++i)
    vertices.push_back({{"id", i},
                        {"depth", b.depth[i]},
                        {"word", word_to_json(p, b.vertices[i])},
                        {"text", to_string(p, b.vertices[i])}});
  json edges = json::array();
  for (const auto& e : b.edges)
    edges.push_back({e.source, letter_to_json(p, e.letter), e.target});
  return json{{"radius", b.radius},
              {"peripheral_bound", b.peripheral_bound},
              {"vertex_count", b.vertices.size()},
              {"edge_count", b.edges.size()},
              {"vertices", vertices},
              {"edges", edges}};
}

}  // namespace relhyp
