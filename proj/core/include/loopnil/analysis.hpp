#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "loopnil/decomp.hpp"
#include "loopnil/loop.hpp"
#include "loopnil/perm_group.hpp"
#include "loopnil/supernil.hpp"

namespace loopnil {

struct AnalysisOptions {
  int kmax = 2;
  std::size_t budget_tuples = kDefaultTupleBudget;
  std::size_t budget_group = kDefaultGroupBudget;
  std::uint64_t seed = 1;
};

/// Three-valued class: a finite value, a proven infinity, or undecided
/// because a budget ran out.
struct ClassValue {
  enum class State { finite, infinite, unknown };
  State state = State::unknown;
  int value = 0;

  static ClassValue finite(int v) { return {State::finite, v}; }
  static ClassValue infinite() { return {State::infinite, 0}; }
  static ClassValue unknown() { return {State::unknown, 0}; }
  bool is_finite() const { return state == State::finite; }
  bool operator==(const ClassValue&) const = default;
};

struct SnLevel {
  int k = 0;
  ForkStatus status = ForkStatus::inconclusive;
  std::size_t closure_size = 0;
  bool operator==(const SnLevel&) const = default;
};

struct SnSummary {
  int lower = 0;
  std::optional<int> upper;
  std::vector<SnLevel> levels;
  bool operator==(const SnSummary&) const = default;
};

/// Per-loop record of everything the analyze pipeline computed.  Volatile
/// run metadata (timestamp, timings) lives apart from the mathematical
/// content so reports can be compared modulo it.
struct AnalysisReport {
  std::string file;
  int index = 0;

  int order = 0;
  bool is_group = false;
  bool is_commutative = false;

  std::optional<int> cl_cn;  // nullopt = not centrally nilpotent
  ClassValue cl_m;
  std::optional<std::size_t> mlt_order, inn_order;

  SnSummary sn;
  std::optional<std::string> decomposition_json;  // present iff cl_m finite

  std::vector<std::string> inconclusive;  // phases stopped by a budget

  std::map<std::string, double> timings_ms;
  std::string timestamp;

  std::uint64_t seed = 0;
  int kmax = 0;
  std::size_t budget_tuples = 0, budget_group = 0;

  bool same_content(const AnalysisReport& o) const;  // ignores timings/timestamp
};

/// Full pipeline: loop-core -> nilpotence -> supernil -> decomp (decomp only
/// when cl_m is finite).  Enforces the cl_sn >= cl_m >= cl_cn inequality on
/// certified values and throws verification_failed on a violation.
AnalysisReport analyze_loop(const Loop& q, const std::string& file, int index,
                            const AnalysisOptions& opts);

std::string report_to_json(const AnalysisReport& r);
AnalysisReport report_from_json(const std::string& text);

/// One aligned human-readable line per report (plus a header helper).
std::string report_table_header();
std::string report_table_row(const AnalysisReport& r);

}  // namespace loopnil
