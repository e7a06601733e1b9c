#include "relhyp/loop_literal.hpp"

#include <cctype>
#include <charconv>
#include <string>

#include "relhyp/errors.hpp"

namespace relhyp {

namespace {

Letter parse_h_token(const RelativePresentation& p, std::string_view tok,
                     std::size_t offset) {
  std::size_t i = 1;
  while (i < tok.size() && (std::isdigit(static_cast<unsigned char>(tok[i])) ||
                            (i == 1 && tok[i] == '-')))
    ++i;
  int label = 0;
  auto [ptr, ec] = std::from_chars(tok.data() + 1, tok.data() + i, label);
  if (ec != std::errc() || ptr != tok.data() + i)
    throw ParseError("bad model label in '" + std::string(tok) + "'", offset);
  if (!p.has_model(label))
    throw ParseError("unknown model label " + std::to_string(label), offset);
  const auto& m = p.model(label);
  auto rest = tok.substr(i);
  ModelElement e;
  try {
    if (rest.empty()) {
      if (m.kind() != ModelKind::FreeAbelian || m.rank() != 1)
        throw ParseError("letter needs an explicit element");
      e = ModelElement{{1}};
    } else if (rest.front() == '^' || rest.front() == ':') {
      e = m.element_from_literal(rest.substr(1));
    } else if (rest.front() == '[') {
      e = m.element_from_literal(rest);
    } else {
      throw ParseError("unexpected text after model label");
    }
  } catch (const ParseError& err) {
    throw ParseError(std::string(err.what()) + " in '" + std::string(tok) + "'",
                     offset);
  }
  if (m.is_identity(e)) throw ParseError("identity peripheral letter", offset);
  return Letter::h(label, std::move(e));
}

}  // namespace

Word parse_loop_literal(const RelativePresentation& p, std::string_view text) {
  Word w;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
      continue;
    }
    std::size_t end = pos;
    while (end < text.size() && !std::isspace(static_cast<unsigned char>(text[end])))
      ++end;
    auto tok = text.substr(pos, end - pos);
    auto caret = tok.find('^');
    auto name = tok.substr(0, caret);
    if (auto id = p.symbol_id(name)) {
      int power = 1;
      if (caret != std::string_view::npos) {
        auto exp = tok.substr(caret + 1);
        auto [ptr, ec] = std::from_chars(exp.data(), exp.data() + exp.size(), power);
        if (ec != std::errc() || ptr != exp.data() + exp.size())
          throw ParseError("bad exponent in '" + std::string(tok) + "'", pos);
        if (power == 0) throw ParseError("zero exponent in '" + std::string(tok) + "'", pos);
      }
      const int sign = power > 0 ? 1 : -1;
      for (int k = 0; k < std::abs(power); ++k) w.letters.push_back(Letter::x(*id, sign));
    } else if (tok.front() == 'h' && tok.size() > 1 &&
               (std::isdigit(static_cast<unsigned char>(tok[1])) || tok[1] == '-')) {
      w.letters.push_back(parse_h_token(p, tok, pos));
    } else {
      throw ParseError("unknown token '" + std::string(tok) + "'", pos);
    }
    pos = end;
  }
  return w;
}

}  // namespace relhyp
