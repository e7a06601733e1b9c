#pragma once

#include <string>

#include "relhyp/filling.hpp"

namespace relhyp {

struct WordProblemVerdict {
  enum class Kind { Trivial, NontrivialCertified, Unknown } kind = Kind::Unknown;
  int area = 0;  // meaningful for Trivial
};

/// Semi-decides w == 1 in G by bounded filling search. An attached oracle is
/// only consulted to certify nontriviality; triviality always comes with a
/// filling of the reported area.
WordProblemVerdict budgeted_word_problem(const RelativePresentation& p, const Word& w,
                                         int max_area, std::size_t max_len,
                                         const GroupOracle* oracle = nullptr,
                                         std::size_t max_states = 200'000);

std::string to_string(const WordProblemVerdict& v);

}  // namespace relhyp
