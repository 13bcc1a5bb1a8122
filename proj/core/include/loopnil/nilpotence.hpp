#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "loopnil/loop.hpp"
#include "loopnil/perm_group.hpp"

namespace loopnil {

/// Upper central series of a loop: Z_0 = {0}, Z_{i+1} the preimage in Q of
/// the center of Q/Z_i.  Terms are stored as subloops of Q itself.
struct CentralSeries {
  std::vector<Subloop> terms;  // Z_0, Z_1, ...
  bool terminated = false;     // reached all of Q
  std::optional<int> cls;      // length when terminated
};

CentralSeries upper_central_series(const Loop& q);

/// cl_cn: length of the terminating upper central series, nullopt otherwise.
std::optional<int> central_nilpotency_class(const Loop& q);

/// cl_m: nilpotency class of Mlt Q.
std::optional<int> mlt_nilpotency_class(const Loop& q,
                                        std::size_t budget = kDefaultGroupBudget);

/// N_0 = Inn Q, N_{i+1} = normalizer of N_i in Mlt Q, until stationary.
std::vector<PermGroup> normalizer_series(const Loop& q,
                                         std::size_t budget = kDefaultGroupBudget);

struct NilReport {
  std::optional<int> cl_cn;
  std::optional<int> cl_m;
  std::size_t mlt_order = 0;
  std::size_t inn_order = 0;
};

NilReport nil_report(const Loop& q, std::size_t budget = kDefaultGroupBudget);

}  // namespace loopnil
