#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "relhyp/loop_literal.hpp"
#include "relhyp/oracle.hpp"

namespace testing {

inline std::string data_path(const std::string& name) {
  return std::string(RELHYP_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline relhyp::PresentationDocument load(const std::string& name) {
  return relhyp::parse_document(slurp(data_path(name)));
}

inline relhyp::Word lit(const relhyp::RelativePresentation& p, const std::string& s) {
  return relhyp::parse_loop_literal(p, s);
}

}  // namespace testing
