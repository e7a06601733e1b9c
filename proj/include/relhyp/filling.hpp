#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "relhyp/oracle.hpp"

namespace relhyp {

struct FillingCaps {
  int max_area = 16;
  std::size_t max_len = 24;  // cap on intermediate word length
  std::size_t max_states = 200'000;
};

/// One step of a filling trace. `Reduce` brings the word to syllable normal
/// form in F (all zero-cost H and free moves at once); `RCell` inserts a cyclic
/// rotation of relator `relator` (or of its inverse when orientation is -1)
/// before letter `position` and reduces again.
struct FillingMove {
  enum class Kind { Reduce, RCell } kind = Kind::Reduce;
  int relator = 0;
  int rotation = 0;
  int position = 0;
  int orientation = 1;
  Word result;
};

struct FillingCertificate {
  Word loop;
  int area = 0;
  std::vector<FillingMove> trace;
  /// No cheaper filling was cut off by the intermediate-length cap.
  bool minimal_within_cap = true;
};

struct FillingResult {
  std::optional<FillingCertificate> certificate;  // empty: Unknown
  std::size_t states_expanded = 0;
  std::string reason;  // why the search gave up, when it did
};

/// Word obtained by inserting the rotation described by `m` into `w` (no
/// reduction).
Word apply_rcell(const RelativePresentation& p, const Word& w, const FillingMove& m);

/// Replays the trace from the loop; true when every recorded intermediate
/// word is reproduced, the last one is empty and the cost equals the area.
bool replay(const RelativePresentation& p, const FillingCertificate& c);

/// Minimal number of relator cells needed to reduce c to the empty word, by
/// A* search over freely reduced words. With an oracle, a nontrivial c throws
/// PreconditionError.
FillingResult relative_area(const RelativePresentation& p, const GroupOracle* o,
                            const Word& c, const FillingCaps& caps = {});

json certificate_to_json(const RelativePresentation& p, const FillingCertificate& c);

struct ProfileEntry {
  int n = 0;
  int max_area = 0;
  std::size_t loop_count = 0;  // trivial loops of length <= n examined
  bool exact = true;
  Word witness;  // a loop attaining max_area
};

struct DehnProfile {
  int rho = 0;
  bool sampled = false;
  std::vector<ProfileEntry> entries;  // n = 1..n_max

  const ProfileEntry& at(int n) const;
  bool covers(int n) const { return n >= 1 && n <= static_cast<int>(entries.size()); }
};

struct ProfileOptions {
  FillingCaps caps;
  std::size_t max_loops = 200'000;  // beyond this, loops are sampled
  std::uint64_t seed = 1;
};

/// Max relative area over trivial loops of letter count <= n, for n up to
/// n_max. Loops are words over ball_alphabet(p, rho) with no adjacent pair of
/// mutually inverse letters.
DehnProfile dehn_profile(const RelativePresentation& p, const GroupOracle& o, int n_max,
                         int rho, const ProfileOptions& opts = {});

struct EscalationRow {
  int rho = 0;
  ProfileEntry entry;
};

/// Profile entry at length n recomputed for each truncation in `rhos`.
std::vector<EscalationRow> rho_escalation(const RelativePresentation& p,
                                          const GroupOracle& o, int n,
                                          const std::vector<int>& rhos,
                                          const ProfileOptions& opts = {});

/// f(n) <= g(C n + K) + L n for every n in [lo, hi].
bool check_asymptotic_dominance(const DehnProfile& f, const DehnProfile& g, int C, int K,
                                double L, int lo, int hi);

enum class GrowthVerdict { LinearConsistent, SuperlinearWitness };

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double max_residual = 0;
  GrowthVerdict verdict = GrowthVerdict::LinearConsistent;
};

/// Least-squares line through the exact entries. The verdict is
/// superlinear-witness when the second differences over the last half of the
/// range (at least two of them) are all positive, or when `escalation` rises
/// strictly with rho.
LinearFit linear_fit(const DehnProfile& profile,
                     const std::vector<EscalationRow>& escalation = {});

std::string to_string(GrowthVerdict v);
std::string profile_csv(const DehnProfile& profile);
json profile_to_json(const RelativePresentation& p, const DehnProfile& profile);

}  // namespace relhyp
