#include "loopnil/analysis.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <sstream>

#include "json.hpp"
#include "loopnil/error.hpp"
#include "loopnil/nilpotence.hpp"

namespace loopnil {

using json = nlohmann::json;

namespace {

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[48];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec);
  return buf;
}

class PhaseTimer {
public:
  explicit PhaseTimer(std::map<std::string, double>& sink) : sink_(sink) {}
  template <class F>
  auto run(const std::string& phase, F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      record(phase, t0);
    } else {
      auto r = f();
      record(phase, t0);
      return r;
    }
  }

private:
  void record(const std::string& phase,
              std::chrono::steady_clock::time_point t0) {
    const auto dt = std::chrono::steady_clock::now() - t0;
    sink_[phase] =
        std::chrono::duration_cast<std::chrono::microseconds>(dt).count() / 1000.0;
  }
  std::map<std::string, double>& sink_;
};

}  // namespace

bool AnalysisReport::same_content(const AnalysisReport& o) const {
  return file == o.file && index == o.index && order == o.order &&
         is_group == o.is_group && is_commutative == o.is_commutative &&
         cl_cn == o.cl_cn && cl_m == o.cl_m && mlt_order == o.mlt_order &&
         inn_order == o.inn_order && sn == o.sn &&
         decomposition_json == o.decomposition_json &&
         inconclusive == o.inconclusive && seed == o.seed && kmax == o.kmax &&
         budget_tuples == o.budget_tuples && budget_group == o.budget_group;
}

AnalysisReport analyze_loop(const Loop& q, const std::string& file, int index,
                            const AnalysisOptions& opts) {
  AnalysisReport r;
  r.file = file;
  r.index = index;
  r.order = q.order();
  r.seed = opts.seed;
  r.kmax = opts.kmax;
  r.budget_tuples = opts.budget_tuples;
  r.budget_group = opts.budget_group;
  r.timestamp = iso_timestamp();

  PhaseTimer timer(r.timings_ms);

  r.is_group = q.is_associative();
  r.is_commutative = q.is_commutative();

  r.cl_cn = timer.run("nilpotence", [&] { return central_nilpotency_class(q); });

  timer.run("mlt", [&] {
    try {
      const PermGroup m = mlt(q, opts.budget_group);
      r.mlt_order = m.order();
      r.inn_order = inn(q, opts.budget_group).order();
      const auto cm = nilpotency_class(m, opts.budget_group);
      r.cl_m = cm ? ClassValue::finite(*cm) : ClassValue::infinite();
    } catch (const Error& e) {
      if (e.code() != Errc::budget_exceeded) throw;
      r.cl_m = ClassValue::unknown();
      r.inconclusive.push_back("mlt");
    }
  });

  timer.run("supernil", [&] {
    const SnBounds b = sn_bounds(q, opts.kmax, opts.budget_tuples);
    r.sn.lower = b.lower;
    r.sn.upper = b.upper;
    for (const auto& lv : b.levels)
      r.sn.levels.push_back({lv.k, lv.status, lv.closure_size});
    for (int k : b.inconclusive_levels)
      r.inconclusive.push_back("sn:k=" + std::to_string(k));
  });

  if (r.cl_m.is_finite()) {
    timer.run("decomp", [&] {
      try {
        r.decomposition_json =
            decomposition_to_json(prime_decompose(q, opts.budget_group));
      } catch (const Error& e) {
        if (e.code() != Errc::budget_exceeded) throw;
        r.inconclusive.push_back("decomp");
      }
    });
  }

  // cl_sn >= cl_m >= cl_cn on certified values; a violation is a bug
  if (r.cl_m.is_finite()) {
    if (!r.cl_cn)
      throw Error(Errc::verification_failed,
                  "cl_m finite but loop not centrally nilpotent");
    if (r.cl_m.value < *r.cl_cn)
      throw Error(Errc::verification_failed, "cl_m < cl_cn");
  }
  if (r.sn.upper) {
    if (r.cl_m.state == ClassValue::State::infinite)
      throw Error(Errc::verification_failed, "cl_sn certified finite but cl_m infinite");
    if (r.cl_m.is_finite() && r.cl_m.value > *r.sn.upper)
      throw Error(Errc::verification_failed, "cl_m > certified sn upper bound");
    if (r.sn.lower >= *r.sn.upper)
      throw Error(Errc::verification_failed, "sn lower bound >= upper bound");
  }
  return r;
}

namespace {

json class_to_json(const std::optional<int>& v) {
  if (v) return *v;
  return nullptr;
}

}  // namespace

std::string report_to_json(const AnalysisReport& r) {
  json j;
  j["id"] = {{"file", r.file}, {"index", r.index}};
  j["order"] = r.order;
  j["is_group"] = r.is_group;
  j["is_commutative"] = r.is_commutative;
  j["cl_cn"] = class_to_json(r.cl_cn);
  if (r.cl_m.state != ClassValue::State::unknown)
    j["cl_m"] = r.cl_m.is_finite() ? json(r.cl_m.value) : json(nullptr);
  if (r.mlt_order) j["mlt_order"] = *r.mlt_order;
  if (r.inn_order) j["inn_order"] = *r.inn_order;

  json levels = json::array();
  for (const auto& lv : r.sn.levels)
    levels.push_back(json{{"k", lv.k},
                          {"status", fork_status_name(lv.status)},
                          {"closure_size", lv.closure_size}});
  j["sn"] = {{"lower", r.sn.lower},
             {"upper", r.sn.upper ? json(*r.sn.upper) : json(nullptr)},
             {"levels", std::move(levels)}};

  if (r.decomposition_json) j["decomposition"] = json::parse(*r.decomposition_json);
  j["inconclusive"] = r.inconclusive;
  j["seed"] = r.seed;
  j["budgets"] = {{"kmax", r.kmax},
                  {"tuples", r.budget_tuples},
                  {"group", r.budget_group}};
  j["run"] = {{"timestamp", r.timestamp}, {"timings_ms", r.timings_ms}};
  return j.dump();
}

AnalysisReport report_from_json(const std::string& text) {
  const json j = json::parse(text);
  AnalysisReport r;
  r.file = j.at("id").at("file").get<std::string>();
  r.index = j.at("id").at("index").get<int>();
  r.order = j.at("order").get<int>();
  r.is_group = j.at("is_group").get<bool>();
  r.is_commutative = j.at("is_commutative").get<bool>();
  if (!j.at("cl_cn").is_null()) r.cl_cn = j.at("cl_cn").get<int>();
  if (j.contains("cl_m"))
    r.cl_m = j["cl_m"].is_null() ? ClassValue::infinite()
                                 : ClassValue::finite(j["cl_m"].get<int>());
  else
    r.cl_m = ClassValue::unknown();
  if (j.contains("mlt_order")) r.mlt_order = j["mlt_order"].get<std::size_t>();
  if (j.contains("inn_order")) r.inn_order = j["inn_order"].get<std::size_t>();

  const json& sn = j.at("sn");
  r.sn.lower = sn.at("lower").get<int>();
  if (!sn.at("upper").is_null()) r.sn.upper = sn.at("upper").get<int>();
  for (const auto& lv : sn.at("levels")) {
    SnLevel l;
    l.k = lv.at("k").get<int>();
    const std::string st = lv.at("status").get<std::string>();
    l.status = st == "fork_found" ? ForkStatus::fork_found
               : st == "supernilpotent_at_k" ? ForkStatus::supernilpotent_at_k
                                             : ForkStatus::inconclusive;
    l.closure_size = lv.at("closure_size").get<std::size_t>();
    r.sn.levels.push_back(l);
  }

  if (j.contains("decomposition")) r.decomposition_json = j["decomposition"].dump();
  r.inconclusive = j.at("inconclusive").get<std::vector<std::string>>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.kmax = j.at("budgets").at("kmax").get<int>();
  r.budget_tuples = j.at("budgets").at("tuples").get<std::size_t>();
  r.budget_group = j.at("budgets").at("group").get<std::size_t>();
  if (j.contains("run")) {
    r.timestamp = j["run"].value("timestamp", "");
    if (j["run"].contains("timings_ms"))
      r.timings_ms = j["run"]["timings_ms"].get<std::map<std::string, double>>();
  }
  return r;
}

std::string report_table_header() {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-24s %5s %5s %4s %5s %5s %8s %8s %8s %s",
                "loop", "order", "group", "comm", "cl_cn", "cl_m", "|Mlt|",
                "sn_low", "sn_up", "notes");
  return buf;
}

std::string report_table_row(const AnalysisReport& r) {
  auto opt_str = [](const std::optional<int>& v) {
    return v ? std::to_string(*v) : std::string("inf");
  };
  std::string clm;
  switch (r.cl_m.state) {
    case ClassValue::State::finite: clm = std::to_string(r.cl_m.value); break;
    case ClassValue::State::infinite: clm = "inf"; break;
    case ClassValue::State::unknown: clm = "?"; break;
  }
  std::string notes;
  if (r.decomposition_json) {
    const json d = json::parse(*r.decomposition_json);
    notes = "factors";
    for (const auto& f : d.at("factors"))
      notes += ":" + std::to_string(f.at("order").get<int>());
  }
  for (const auto& s : r.inconclusive) notes += (notes.empty() ? "" : " ") + s;

  const std::string id = r.file + ":" + std::to_string(r.index);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-24s %5d %5s %4s %5s %5s %8s %8d %8s %s",
                id.c_str(), r.order, r.is_group ? "yes" : "no",
                r.is_commutative ? "yes" : "no", opt_str(r.cl_cn).c_str(),
                clm.c_str(),
                r.mlt_order ? std::to_string(*r.mlt_order).c_str() : "?",
                r.sn.lower, r.sn.upper ? std::to_string(*r.sn.upper).c_str() : "?",
                notes.c_str());
  return buf;
}

}  // namespace loopnil
