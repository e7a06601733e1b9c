#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "relhyp/cayley.hpp"
#include "relhyp/oracle.hpp"

namespace relhyp {

/// Word in the free group F_n on a_1..a_n: letter ±(i+1) stands for a_i^±1.
using FnWord = std::vector<int>;

bool is_reduced(const FnWord& a);
FnWord fn_reduce(const FnWord& a);
FnWord fn_inverse(const FnWord& a);
FnWord fn_concat(const FnWord& a, const FnWord& b);
/// Reduced words of length exactly `len`, in shortlex order with letters
/// ordered a_1, a_1^-1, a_2, ...
std::vector<FnWord> fn_sphere(int rank, int len);
std::string fn_to_string(const FnWord& a);
/// "a1 a2^-1", "1" for the empty word.
FnWord fn_from_string(std::string_view text);

/// Endomorphism data of G: images of X symbols, a permutation sigma of the
/// labels, maps iota_lambda: H_lambda -> H_sigma(lambda) and conjugators
/// g_lambda, with alpha(h) = g_lambda^-1 iota(h) g_lambda.
struct RelMap {
  std::map<int, Word> x_images;  // by X symbol id; missing = identity
  std::map<int, int> sigma;      // missing = fixed
  /// Generator images for Z^d and F_k models, the image of every element for
  /// finite models; missing = identity map (requires sigma(lambda) == lambda).
  std::map<int, std::vector<ModelElement>> peripheral;
  std::map<int, Word> conjugators;  // missing = empty word
};

struct RelAutomorphism {
  RelMap forward;
  RelMap inverse;
};

/// An action of F_n by relative automorphisms, one per basis letter.
struct FreeAction {
  int basis = 0;
  std::vector<RelAutomorphism> automorphisms;
};

FreeAction identity_action(int basis);

/// Image of w under a single map, freely reduced.
Word apply_map(const RelativePresentation& p, const RelMap& m, const Word& w);
/// alpha_a(w) with alpha_{a a'} = alpha_a o alpha_a'. Throws PreconditionError
/// for unreduced a.
Word apply(const RelativePresentation& p, const FreeAction& action, const FnWord& a,
           const Word& w);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> failures;
  std::string witness;  // first failing generator, loop grammar
};

/// Checks sigma is a label permutation matching model kinds, the peripheral
/// maps are homomorphisms (isomorphisms for Z^d and finite models), relators
/// go to 1, and both composites with the inverse fix every generator.
ValidationReport validate_relaut(const RelativePresentation& p, const GroupOracle& o,
                                 const RelAutomorphism& alpha);

struct CorridorEntry {
  FnWord a;
  Word image;  // alpha_{a^-1}(g)
  RelLength length;
};

/// Lengths of the horizontal geodesics gamma_g(a) = |alpha_{a^-1}(g)| for all
/// reduced a with |a| <= N.
struct Corridor {
  Word g;
  int N = 0;
  std::vector<CorridorEntry> entries;  // shortlex order

  const CorridorEntry* find(const FnWord& a) const;
};

Corridor build_corridor(const RelativePresentation& p, const GroupOracle& o,
                        const FreeAction& action, const Word& g, int N,
                        const LengthOptions& opts = {});

enum class SeparationVerdict { Separated, Violated, Indeterminate };

struct Violation {
  Word g;
  FnWord w, u, v;
  RelLength lw, lu, lv;
};

struct SeparationReport {
  double lambda = 0;
  int N = 0, M = 0;
  SeparationVerdict verdict = SeparationVerdict::Separated;
  bool exhaustive = false;  // set by callers that pass a full ball as sample
  std::size_t samples = 0;
  std::size_t pairs_checked = 0;
  std::size_t indeterminate = 0;
  std::size_t violation_count = 0;
  std::vector<Violation> violations;  // the first max_violations, in sample order
};

struct SeparationOptions {
  int center_radius = 1;  // centers w range over |w| <= center_radius
  std::size_t max_violations = 100;
  LengthOptions lengths;
};

/// (lambda, N, M)-separation on a sample of g: at every center w with
/// l(gamma_g(w)) >= M, for u = w u', v = w v' with |u'| = |v'| = N and
/// |u^-1 v| = 2N, require lambda l(gamma_g(w)) <= max(l(gamma_g(u)), l(gamma_g(v))).
SeparationReport check_separated(const RelativePresentation& p, const GroupOracle& o,
                                 const FreeAction& action, const std::vector<Word>& sample,
                                 double lambda, int N, int M,
                                 const SeparationOptions& opts = {});

/// Flare inequality at the identity: lambda l(g) <= max(l(alpha_a(g)), l(alpha_b(g)))
/// for |a| = |b| = N with |a^-1 b| = 2N, for every sampled g with l(g) >= M.
SeparationReport check_uniform_flare(const RelativePresentation& p, const GroupOracle& o,
                                     const FreeAction& action, const std::vector<Word>& sample,
                                     double lambda, int N, int M,
                                     const SeparationOptions& opts = {});

struct PairingResult {
  double lhs = 0;
  double rhs = 0;
  enum class Status { Equal, Unequal, Indeterminate } status = Status::Equal;
  std::vector<FnWord> path;  // w_1 = u, ..., w_n = v
};

/// Evaluates the corridor cocycle pairing along the F_n geodesic from u to v:
/// rhs sums l(gamma_g(w_i)) for i < n, lhs sums, over a geodesic edge path for
/// each gamma_g(w_i), the increments f(e) = d(t(e)) - d(i(e)) of the relative
/// distance from the base vertex.
PairingResult corridor_cocycle_pairing(const RelativePresentation& p, const GroupOracle& o,
                                       const FreeAction& action, const Word& g,
                                       const FnWord& u, const FnWord& v,
                                       const LengthOptions& opts = {});

/// For every pair of opposite directions at distance N from the identity:
/// whether one of the two F_n geodesics keeps all corridor lengths at least
/// l(gamma_g(1)) / lambda_plus.
struct SideReport {
  struct Row {
    FnWord a, b;
    bool a_side_holds = false;
    bool b_side_holds = false;
  };
  std::vector<Row> rows;
  bool all_hold = true;
};

SideReport side_report(const Corridor& corridor, double lambda_plus);

/// Membership of the pair (g, a) in the F_n-extension of H_label:
/// alpha_a(H_label) == g^-1 H_label g, tested on generators in both directions.
bool in_fn_extension(const RelativePresentation& p, const GroupOracle& o,
                     const FreeAction& action, int label, const Word& g, const FnWord& a);

/// Least label of every orbit of the labels under the permutations sigma_i.
std::vector<int> orbit_representatives(const RelativePresentation& p, const FreeAction& action);

FreeAction action_from_json(const RelativePresentation& p, const json& j);
json action_to_json(const RelativePresentation& p, const FreeAction& action);
FreeAction parse_action(const RelativePresentation& p, std::string_view text);

std::string to_string(SeparationVerdict v);
json corridor_to_json(const RelativePresentation& p, const Corridor& c);
json separation_to_json(const RelativePresentation& p, const SeparationReport& r);
json pairing_to_json(const PairingResult& r);

}  // namespace relhyp
