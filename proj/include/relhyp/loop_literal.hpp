#pragma once

#include <string_view>

#include "relhyp/presentation.hpp"

namespace relhyp {

/// Parses the whitespace-separated loop grammar used on the command line:
///
///   x        x^-1     x^3            generator symbols, integer powers
///   h1^2     h2^(1,-1)               Z^d model letters
///   h3[1,-2]                         F_k model letters
///   h4:a     h4:2                    finite model letters (name or index)
///
/// Powers of X symbols expand into repeated letters. Nothing is reduced, so
/// "x x^-1" stays a two-letter word. Errors carry the byte offset of the bad
/// token.
Word parse_loop_literal(const RelativePresentation& p, std::string_view text);

}  // namespace relhyp
