#include "loopnil/nilpotence.hpp"

namespace loopnil {

CentralSeries upper_central_series(const Loop& q) {
  CentralSeries cs;
  cs.terms.push_back(q.subloop({0}));
  for (;;) {
    const Subloop& zi = cs.terms.back();
    if (zi.is_whole()) {
      cs.terminated = true;
      cs.cls = static_cast<int>(cs.terms.size()) - 1;
      return cs;
    }
    auto [factor, proj] = q.quotient(zi);
    const Subloop c = factor.center();
    std::vector<int> next;
    for (int x = 0; x < q.order(); ++x)
      if (c.contains(proj[x])) next.push_back(x);
    if (next.size() == zi.size()) return cs;  // stationary below Q
    cs.terms.push_back(q.subloop(std::move(next)));
  }
}

std::optional<int> central_nilpotency_class(const Loop& q) {
  return upper_central_series(q).cls;
}

std::optional<int> mlt_nilpotency_class(const Loop& q, std::size_t budget) {
  return nilpotency_class(mlt(q, budget), budget);
}

std::vector<PermGroup> normalizer_series(const Loop& q, std::size_t budget) {
  const PermGroup m = mlt(q, budget);
  std::vector<PermGroup> series;
  series.push_back(inn(q, budget));
  for (;;) {
    PermGroup next = normalizer(m, series.back());
    if (next == series.back()) return series;
    series.push_back(std::move(next));
  }
}

NilReport nil_report(const Loop& q, std::size_t budget) {
  NilReport r;
  r.cl_cn = central_nilpotency_class(q);
  const PermGroup m = mlt(q, budget);
  r.mlt_order = m.order();
  r.inn_order = inn(q, budget).order();
  r.cl_m = nilpotency_class(m, budget);
  return r;
}

}  // namespace loopnil
