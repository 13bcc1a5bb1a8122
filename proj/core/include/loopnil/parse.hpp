#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "loopnil/loop.hpp"

namespace loopnil {

/// Reads one Cayley table: '#' lines are comments, the first content line is
/// n, then n rows of n integer labels.  The identity may be any element; the
/// result is re-indexed so it is internal 0, original labels retained.
/// Throws Error with code malformed_input / not_latin_square / no_identity;
/// parse errors carry 1-based row/column positions within the table.
Loop parse_cayley(std::istream& in);

/// All tables in a stream, separated by blank lines.
std::vector<Loop> parse_cayley_stream(std::istream& in);

std::vector<Loop> parse_cayley_file(const std::string& path);

/// Writes a table in the accepted format (labels, identity-first order).
std::string format_cayley(const Loop& q);

}  // namespace loopnil
