// Command-line front end: validate | analyze | decompose | fork over Cayley
// table files.  Exit codes: 0 ok, 1 invalid input, 2 internal verification
// failure.

#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "loopnil/analysis.hpp"
#include "loopnil/error.hpp"
#include "loopnil/nilpotence.hpp"
#include "loopnil/parse.hpp"

using namespace loopnil;
using json = nlohmann::json;

namespace {

struct LoadedLoop {
  std::string file;
  int index;
  Loop loop;
};

// parses every table in every path; parse failures are fatal (exit 1)
std::vector<LoadedLoop> load_all(const std::vector<std::string>& paths) {
  std::vector<LoadedLoop> out;
  for (const auto& path : paths) {
    const auto loops = parse_cayley_file(path);
    for (std::size_t i = 0; i < loops.size(); ++i)
      out.push_back({path, static_cast<int>(i), loops[i]});
  }
  return out;
}

int cmd_validate(const std::vector<std::string>& paths, bool as_json) {
  bool all_ok = true;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) {
      all_ok = false;
      if (as_json)
        std::cout << json{{"file", path}, {"ok", false}, {"error", "cannot open"}}
                  << "\n";
      else
        std::cout << path << " error: cannot open\n";
      continue;
    }
    int index = 0;
    for (;;) {
      // peek for remaining content
      std::string probe;
      std::streampos pos = in.tellg();
      bool more = false;
      while (std::getline(in, probe)) {
        const auto c = probe.find_first_not_of(" \t\r");
        if (c != std::string::npos && probe[c] != '#') {
          more = true;
          break;
        }
      }
      if (!more) {
        if (index == 0) {
          all_ok = false;
          if (as_json)
            std::cout << json{{"file", path},
                              {"index", 0},
                              {"ok", false},
                              {"error", "MalformedInput"},
                              {"message", "no table found"}}
                      << "\n";
          else
            std::cout << path << " error: MalformedInput: no table found\n";
        }
        break;
      }
      in.clear();
      in.seekg(pos);
      try {
        const Loop q = parse_cayley(in);
        if (as_json)
          std::cout << json{{"file", path},
                            {"index", index},
                            {"ok", true},
                            {"order", q.order()}}
                    << "\n";
        else
          std::cout << "OK " << path << ":" << index << " order " << q.order()
                    << "\n";
      } catch (const Error& e) {
        all_ok = false;
        if (as_json) {
          json j{{"file", path}, {"index", index}, {"ok", false},
                 {"error", errc_name(e.code())}, {"message", e.what()}};
          if (e.row() > 0) j["row"] = e.row();
          if (e.col() > 0) j["col"] = e.col();
          std::cout << j << "\n";
        } else {
          std::cout << path << ":" << index << " error: " << e.what();
          if (e.row() > 0) {
            std::cout << " at row " << e.row();
            if (e.col() > 0) std::cout << ", column " << e.col();
          }
          std::cout << "\n";
        }
        break;  // resynchronizing after a bad table is not worth guessing
      }
      ++index;
    }
  }
  return all_ok ? 0 : 1;
}

int cmd_analyze(const std::vector<std::string>& paths, const AnalysisOptions& opts,
                bool as_json, int threads) {
  const auto loops = load_all(paths);
  std::vector<AnalysisReport> reports(loops.size());
  std::vector<std::exception_ptr> errors(loops.size());

  auto work = [&](std::size_t i) {
    try {
      reports[i] = analyze_loop(loops[i].loop, loops[i].file, loops[i].index, opts);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (threads <= 1) {
    for (std::size_t i = 0; i < loops.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t nt = std::min(static_cast<std::size_t>(threads), loops.size());
    for (std::size_t t = 0; t < nt; ++t)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= loops.size()) return;
          work(i);
        }
      });
    for (auto& th : pool) th.join();
  }

  // report order follows input order regardless of completion order
  if (!as_json) std::cout << report_table_header() << "\n";
  for (std::size_t i = 0; i < loops.size(); ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    std::cout << (as_json ? report_to_json(reports[i]) : report_table_row(reports[i]))
              << "\n";
  }
  return 0;
}

int cmd_decompose(const std::vector<std::string>& paths, std::size_t budget,
                  bool as_json) {
  for (const auto& l : load_all(paths)) {
    try {
      const Decomposition d = prime_decompose(l.loop, budget);
      if (as_json) {
        json j = json::parse(decomposition_to_json(d));
        j["id"] = {{"file", l.file}, {"index", l.index}};
        j["order"] = l.loop.order();
        std::cout << j.dump() << "\n";
      } else {
        std::cout << l.file << ":" << l.index << " order " << l.loop.order()
                  << " factors";
        for (const auto& [p, f] : d.factors) std::cout << " " << f.order();
        std::cout << "\n";
      }
    } catch (const Error& e) {
      if (e.code() != Errc::mlt_not_nilpotent) throw;
      if (as_json)
        std::cout << json{{"id", {{"file", l.file}, {"index", l.index}}},
                          {"order", l.loop.order()},
                          {"error", "MltNotNilpotent"}}
                         .dump()
                  << "\n";
      else
        std::cout << l.file << ":" << l.index << " error: MltNotNilpotent\n";
    }
  }
  return 0;
}

int cmd_fork(const std::string& path, int k, std::size_t budget, bool as_json) {
  for (const auto& l : load_all({path})) {
    const ForkResult r = fork_search(l.loop, k, budget);
    if (r.witnesses) {
      // witnesses must replay before being emitted
      if (!replay_witness(l.loop, k, r.witnesses->first) ||
          !replay_witness(l.loop, k, r.witnesses->second))
        throw Error(Errc::verification_failed, "fork witness failed replay");
    }
    json j = json::parse(fork_result_to_json(r, l.loop));
    j["id"] = {{"file", l.file}, {"index", l.index}};
    if (as_json) {
      std::cout << j.dump() << "\n";
    } else {
      std::cout << l.file << ":" << l.index << " k=" << k << " "
                << fork_status_name(r.status) << " closure_size=" << r.closure_size
                << "\n";
      if (r.witnesses) std::cout << j["witnesses"].dump(2) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite loop analysis: central nilpotence, multiplication-group "
               "nilpotence, supernilpotence bounds, prime decomposition"};
  app.require_subcommand(1);

  std::vector<std::string> paths;
  bool as_json = false;
  AnalysisOptions opts;
  int threads = 1;
  int fork_k = 1;

  auto* validate = app.add_subcommand("validate", "check Cayley table files");
  validate->add_option("paths", paths)->required();
  validate->add_flag("--json", as_json, "one JSON object per line");

  auto* analyze = app.add_subcommand("analyze", "full analysis per loop");
  analyze->add_option("paths", paths)->required();
  analyze->add_option("--kmax", opts.kmax, "highest supernilpotence level to try");
  analyze->add_option("--budget-tuples", opts.budget_tuples,
                      "closure budget per level");
  analyze->add_option("--budget-group", opts.budget_group,
                      "group enumeration budget");
  analyze->add_option("--seed", opts.seed, "seed recorded in reports");
  analyze->add_option("--threads", threads, "worker pool size");
  analyze->add_flag("--json", as_json, "one JSON object per line");

  auto* decompose = app.add_subcommand("decompose", "prime decomposition");
  decompose->add_option("paths", paths)->required();
  decompose->add_option("--budget-group", opts.budget_group,
                        "group enumeration budget");
  decompose->add_flag("--json", as_json, "one JSON object per line");

  auto* fork = app.add_subcommand("fork", "fork search at one level");
  std::string fork_path;
  fork->add_option("path", fork_path)->required();
  fork->add_option("--k", fork_k, "level")->required();
  fork->add_option("--budget", opts.budget_tuples, "closure budget");
  fork->add_flag("--json", as_json, "one JSON object per line");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(validate)) return cmd_validate(paths, as_json);
    if (app.got_subcommand(analyze))
      return cmd_analyze(paths, opts, as_json, threads);
    if (app.got_subcommand(decompose))
      return cmd_decompose(paths, opts.budget_group, as_json);
    if (app.got_subcommand(fork))
      return cmd_fork(fork_path, fork_k, opts.budget_tuples, as_json);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::malformed_input:
      case Errc::not_latin_square:
      case Errc::no_identity:
        return 1;
      case Errc::verification_failed:
      case Errc::inner_mismatch:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
