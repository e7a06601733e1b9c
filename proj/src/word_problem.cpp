#include "relhyp/word_problem.hpp"

namespace relhyp {

WordProblemVerdict budgeted_word_problem(const RelativePresentation& p, const Word& w,
                                         int max_area, std::size_t max_len,
                                         const GroupOracle* oracle,
                                         std::size_t max_states) {
  using Kind = WordProblemVerdict::Kind;
  if (oracle && !oracle->normal_form(p, w).empty()) return {Kind::NontrivialCertified, 0};
  auto r = relative_area(p, nullptr, w, {max_area, max_len, max_states});
  if (r.certificate) return {Kind::Trivial, r.certificate->area};
  return {Kind::Unknown, 0};
}

std::string to_string(const WordProblemVerdict& v) {
  switch (v.kind) {
    case WordProblemVerdict::Kind::Trivial:
      return "trivial(" + std::to_string(v.area) + ")";
    case WordProblemVerdict::Kind::NontrivialCertified:
      return "nontrivial";
    case WordProblemVerdict::Kind::Unknown:
      break;
  }
  return "unknown";
}

}  // namespace relhyp
