#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace loopnil {

enum class Errc {
  malformed_input,
  not_latin_square,
  no_identity,
  not_a_subloop,
  not_normal,
  budget_exceeded,
  inner_mismatch,
  not_subgroup,
  not_nilpotent,
  orbit_not_subloop,
  mlt_not_nilpotent,
  verification_failed,
  arity_mismatch,
};

const char* errc_name(Errc c);

/// Single exception type for all contract violations; `code()` identifies
/// which one.  Parse errors carry the 1-based row/column of the offending
/// entry, budget overruns the count reached before the stop.
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

  Error& at(int row, int col) {
    row_ = row;
    col_ = col;
    return *this;
  }
  Error& with_partial(std::size_t partial) {
    partial_ = partial;
    return *this;
  }

  int row() const { return row_; }
  int col() const { return col_; }
  std::size_t partial() const { return partial_; }

private:
  Errc code_;
  int row_ = -1;
  int col_ = -1;
  std::size_t partial_ = 0;
};

}  // namespace loopnil
