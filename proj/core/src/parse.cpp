#include "loopnil/parse.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>

#include "loopnil/error.hpp"

namespace loopnil {

namespace {

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

bool is_comment(const std::string& line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos != std::string::npos && line[pos] == '#';
}

// next content line; false on end-of-stream.  stop_at_blank: a blank line
// ends the current table instead of being skipped.
bool next_content_line(std::istream& in, std::string& line, bool stop_at_blank) {
  while (std::getline(in, line)) {
    if (is_comment(line)) continue;
    if (is_blank(line)) {
      if (stop_at_blank) return false;
      continue;
    }
    return true;
  }
  return false;
}

std::vector<long> parse_ints(const std::string& line, int row) {
  std::istringstream ss(line);
  std::vector<long> out;
  std::string tok;
  while (ss >> tok) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != tok.size())
      throw Error(Errc::malformed_input, "non-integer token '" + tok + "'")
          .at(row, static_cast<int>(out.size()) + 1);
    out.push_back(v);
  }
  return out;
}

Loop loop_from_labeled_table(const std::vector<std::vector<long>>& t) {
  const int n = static_cast<int>(t.size());

  // the label set is row 1; every row/column must be a permutation of it
  std::map<long, int> freq;
  for (long v : t[0]) ++freq[v];
  if (static_cast<int>(freq.size()) != n)
    throw Error(Errc::not_latin_square, "first row repeats a label").at(1, -1);

  for (int i = 0; i < n; ++i) {
    std::map<long, int> seen;
    for (int j = 0; j < n; ++j) {
      long v = t[i][j];
      if (!freq.count(v))
        throw Error(Errc::not_latin_square, "label not present in first row")
            .at(i + 1, j + 1);
      if (seen[v]++)
        throw Error(Errc::not_latin_square, "repeated label in row").at(i + 1, j + 1);
    }
  }
  for (int j = 0; j < n; ++j) {
    std::map<long, int> seen;
    for (int i = 0; i < n; ++i)
      if (seen[t[i][j]]++)
        throw Error(Errc::not_latin_square, "repeated label in column").at(i + 1, j + 1);
  }

  // rows are in label order: input element k carries the k-th smallest
  // label.  The identity is the row listing the labels in that order, with
  // a matching column.
  std::vector<long> lam;
  lam.reserve(n);
  for (const auto& [v, cnt] : freq) lam.push_back(v);  // std::map: ascending

  int id_row = -1;
  for (int r = 0; r < n && id_row < 0; ++r) {
    bool ok = true;
    for (int k = 0; k < n; ++k)
      if (t[r][k] != lam[k] || t[k][r] != lam[k]) {
        ok = false;
        break;
      }
    if (ok) id_row = r;
  }
  if (id_row < 0)
    throw Error(Errc::no_identity, "no two-sided identity element");

  std::map<long, int> input_of;
  for (int k = 0; k < n; ++k) input_of[lam[k]] = k;

  std::vector<int> order;  // internal -> input index
  order.push_back(id_row);
  for (int k = 0; k < n; ++k)
    if (k != id_row) order.push_back(k);
  std::vector<int> internal_of(n);
  for (int i = 0; i < n; ++i) internal_of[order[i]] = i;

  std::vector<std::vector<int>> table(n, std::vector<int>(n));
  std::vector<int> labels(n);
  for (int i = 0; i < n; ++i) {
    labels[i] = static_cast<int>(lam[order[i]]);
    for (int j = 0; j < n; ++j)
      table[i][j] = internal_of[input_of.at(t[order[i]][order[j]])];
  }
  return Loop::from_table(table, std::move(labels));
}

// one table; `started` receives whether any content was seen
Loop parse_one(std::istream& in, bool& started) {
  std::string line;
  started = false;
  if (!next_content_line(in, line, /*stop_at_blank=*/false))
    throw Error(Errc::malformed_input, "empty input");
  started = true;

  auto head = parse_ints(line, 1);
  if (head.size() != 1 || head[0] < 1)
    throw Error(Errc::malformed_input, "expected a single positive order").at(1, 1);
  const int n = static_cast<int>(head[0]);

  std::vector<std::vector<long>> t;
  for (int i = 0; i < n; ++i) {
    if (!next_content_line(in, line, /*stop_at_blank=*/true))
      throw Error(Errc::malformed_input, "table ended early").at(i + 1, -1);
    auto row = parse_ints(line, i + 1);
    if (static_cast<int>(row.size()) != n)
      throw Error(Errc::malformed_input, "wrong number of entries in row").at(i + 1, -1);
    t.push_back(std::move(row));
  }
  return loop_from_labeled_table(t);
}

}  // namespace

Loop parse_cayley(std::istream& in) {
  bool started = false;
  return parse_one(in, started);
}

std::vector<Loop> parse_cayley_stream(std::istream& in) {
  std::vector<Loop> out;
  std::string probe;
  for (;;) {
    // peek for remaining content
    std::streampos pos = in.tellg();
    if (!next_content_line(in, probe, /*stop_at_blank=*/false)) break;
    in.seekg(pos);
    bool started = false;
    out.push_back(parse_one(in, started));
  }
  if (out.empty()) throw Error(Errc::malformed_input, "empty input");
  return out;
}

std::vector<Loop> parse_cayley_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::malformed_input, "cannot open '" + path + "'");
  return parse_cayley_stream(in);
}

std::string format_cayley(const Loop& q) {
  std::ostringstream out;
  const int n = q.order();
  out << n << "\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j) out << ' ';
      out << q.label(q.mul(i, j));
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace loopnil
