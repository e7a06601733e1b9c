#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "relhyp/oracle.hpp"

namespace relhyp {

struct BallEdge {
  std::size_t source = 0;
  Letter letter;
  std::size_t target = 0;
};

/// Truncated ball in the relative Cayley graph. Vertex 0 is the identity;
/// vertices are oracle normal forms listed in BFS order.
struct BallGraph {
  std::vector<Word> vertices;
  std::vector<int> depth;
  std::vector<BallEdge> edges;
  int radius = 0;
  int peripheral_bound = 0;

  std::optional<std::size_t> find(const Word& normal_form) const;

  std::unordered_map<Word, std::size_t, WordHash> index;
};

/// X letters (both signs, symbol order) followed by the H letters of
/// model-length <= rho, model by model in (length, encoding) order.
std::vector<Letter> ball_alphabet(const RelativePresentation& p, int rho);

/// BFS ball of the given radius. Edges are recorded from every vertex of depth
/// < radius. Throws ResourceError when more than max_vertices vertices appear.
BallGraph truncated_ball(const RelativePresentation& p, const GroupOracle& o,
                         int radius, int rho, std::size_t max_vertices = 1'000'000);

/// Relative word length: Exact(n) when lower == upper.
struct RelLength {
  int lower = 0;
  int upper = 0;

  static RelLength exact(int n) { return {n, n}; }
  static RelLength bounds(int lo, int hi) { return {lo, hi}; }
  bool is_exact() const noexcept { return lower == upper; }
  int value() const noexcept { return upper; }

  bool operator==(const RelLength&) const = default;
};

struct LengthOptions {
  int rho = 4;          // initial bound on model-length of candidate H letters
  int max_rho = 16;     // escalation stops once rho exceeds this
  int closure_depth = 1;  // rounds of same-model products among candidates
  std::size_t max_states = 200'000;
};

struct LengthResult {
  RelLength length;
  Word witness;  // a representative with letter_count == length.upper
  int rho = 0;   // last truncation used (0 when no search was needed)
};

LengthResult rel_length_search(const RelativePresentation& p, const GroupOracle& o,
                               const Word& w, const LengthOptions& opts = {});

RelLength rel_length(const RelativePresentation& p, const GroupOracle& o,
                     const Word& w, const LengthOptions& opts = {});

/// A word of minimal letter count equal to w in G. Throws ResourceError when
/// the length is only bracketed under the truncation reached.
Word geodesic_witness(const RelativePresentation& p, const GroupOracle& o,
                      const Word& w, const LengthOptions& opts = {});

json rel_length_to_json(const RelLength& l);

/// Edge list, one "source,letter,target" row per edge after a header row.
std::string ball_edges_csv(const RelativePresentation& p, const BallGraph& b);
json ball_to_json(const RelativePresentation& p, const BallGraph& b);

}  // namespace relhyp
