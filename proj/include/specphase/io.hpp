// Copyright 2026 The specphase Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Text formats.
//
// Edge list: one "u v" pair per line, whitespace separated. Blank lines and
// lines starting with '#' are skipped. Ids are arbitrary tokens, numbered in
// order of first appearance. A line with a single token declares a node
// without adding an edge; this is how isolated nodes and the id order survive
// a write/read cycle.
//
// Labels: CSV "id,label", optional header row "id,label".
//
// Result CSVs start with a version comment ("# specphase-sweep v1", ...)
// followed by a header row. Floats use the shortest round-trip form, capped at
// 10 significant digits. Missing values are empty fields. Line ends are LF.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <utility>
#include <vector>

#include "specphase/assess.hpp"
#include "specphase/error.hpp"
#include "specphase/gen.hpp"
#include "specphase/graph.hpp"

namespace specphase {

/// External node names <-> dense ids.
class IdMap {
 public:
  NodeId intern(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it != index_.end()) return it->second;
    const auto id = static_cast<NodeId>(names_.size());
    names_.emplace_back(name);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::optional<NodeId> find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::string& name(NodeId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }

  /// Ids named "0", "1", ..., "n-1".
  static IdMap identity(std::size_t n) {
    IdMap m;
    for (std::size_t i = 0; i < n; ++i) m.intern(std::to_string(i));
    return m;
  }

  friend bool operator==(const IdMap& a, const IdMap& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, NodeId> index_;
};

struct EdgeListData {
  SparseGraph graph;
  IdMap ids;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

inline std::vector<std::string> split_csv(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    out.emplace_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "' for reading");
  return in;
}

}  // namespace detail

/// Writes `content` to `path` via a sibling temporary file and a rename, so a
/// failed write never leaves a partial file behind.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open '" + tmp.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw DataError("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw DataError("cannot move result into '" + path.string() + "': " + ec.message());
  }
}

inline EdgeListData parse_edge_list(std::istream& in, const std::string& source = "<stream>") {
  IdMap ids;
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto tokens = detail::split_ws(body);
    auto where = [&] { return source + ":" + std::to_string(lineno) + ": "; };
    if (tokens.size() == 1) {
      ids.intern(tokens[0]);
      continue;
    }
    if (tokens.size() != 2) {
      throw DataError(where() + "expected 'u v', got " + std::to_string(tokens.size()) +
                      " tokens");
    }
    if (tokens[0] == tokens[1]) {
      throw DataError(where() + "self-loop on '" + std::string(tokens[0]) + "'");
    }
    const NodeId u = ids.intern(tokens[0]);
    const NodeId v = ids.intern(tokens[1]);
    edges.emplace_back(u, v);
  }
  if (ids.size() < 2) {
    throw DataError(source + ": graph needs at least 2 nodes, found " + std::to_string(ids.size()));
  }
  return {SparseGraph::from_edges(ids.size(), edges), std::move(ids)};
}

inline EdgeListData read_edge_list(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return parse_edge_list(in, path.string());
}

/// Node declarations in id order, then edges (i < j). Reading the result back
/// reproduces the graph and the id map exactly.
inline std::string format_edge_list(const SparseGraph& g, const IdMap& ids) {
  if (ids.size() != g.num_nodes()) throw DataError("format_edge_list: id map size mismatch");
  std::string out = "# nodes " + std::to_string(g.num_nodes()) + " edges " +
                    std::to_string(g.num_edges()) + "\n";
  for (NodeId i = 0; i < g.num_nodes(); ++i) out += ids.name(i) + "\n";
  for (const auto& [u, v] : g.edges()) out += ids.name(u) + " " + ids.name(v) + "\n";
  return out;
}

inline void write_edge_list(const SparseGraph& g, const IdMap& ids,
                            const std::filesystem::path& path) {
  write_file_atomic(path, format_edge_list(g, ids));
}

/// Raw label strings aligned with dense ids.
inline std::vector<std::string> parse_labels(std::istream& in, const IdMap& ids,
                                             const std::string& source = "<stream>") {
  std::vector<std::optional<std::string>> labels(ids.size());
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto fields = detail::split_csv(body);
    auto where = [&] { return source + ":" + std::to_string(lineno) + ": "; };
    if (first && fields.size() == 2 && fields[0] == "id" && fields[1] == "label") {
      first = false;
      continue;
    }
    first = false;
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw DataError(where() + "expected 'id,label'");
    }
    const auto id = ids.find(fields[0]);
    if (!id) throw DataError(where() + "unknown node id '" + fields[0] + "'");
    if (labels[*id]) throw DataError(where() + "duplicate label for '" + fields[0] + "'");
    labels[*id] = fields[1];
  }
  std::vector<std::string> out;
  out.reserve(labels.size());
  for (NodeId i = 0; i < labels.size(); ++i) {
    if (!labels[i]) throw DataError(source + ": missing label for node '" + ids.name(i) + "'");
    out.push_back(*labels[i]);
  }
  return out;
}

inline std::vector<std::string> read_labels(const std::filesystem::path& path, const IdMap& ids) {
  auto in = detail::open_in(path);
  return parse_labels(in, ids, path.string());
}

inline std::string format_labels(std::span<const std::string> labels, const IdMap& ids) {
  std::string out = "id,label\n";
  for (NodeId i = 0; i < labels.size(); ++i) out += ids.name(i) + "," + labels[i] + "\n";
  return out;
}

inline void write_labels(std::span<const std::string> labels, const IdMap& ids,
                         const std::filesystem::path& path) {
  write_file_atomic(path, format_labels(labels, ids));
}

/// How labels beyond the two largest classes are scored.
struct ExtraLabelPolicy {
  enum class Kind { Ignore, Merge } kind = Kind::Ignore;
  std::string merge_into;  // a main class label, for Kind::Merge

  static ExtraLabelPolicy parse(const std::string& s) {
    if (s == "ignore") return {};
    const std::string prefix = "merge:";
    if (s.rfind(prefix, 0) == 0 && s.size() > prefix.size()) {
      return {Kind::Merge, s.substr(prefix.size())};
    }
    throw DataError("unknown extra-label policy '" + s + "' (expected ignore|merge:<label>)");
  }
};

/// Maps raw labels to {0, 1}. The two most frequent labels (ties broken by
/// first appearance) become 0 and 1 in order of first appearance. Other labels
/// become -1 (never counted as correct) or join the named main class.
inline std::vector<int> binarize_labels(std::span<const std::string> raw,
                                        const ExtraLabelPolicy& policy = {}) {
  std::vector<std::string> order;
  std::map<std::string, std::size_t> count;
  for (const auto& l : raw) {
    if (count[l]++ == 0) order.push_back(l);
  }
  if (order.size() < 2) throw DataError("labels: need at least two classes");
  std::vector<std::string> ranked = order;
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](const std::string& a, const std::string& b) { return count[a] > count[b]; });
  std::vector<std::string> main(ranked.begin(), ranked.begin() + 2);
  std::sort(main.begin(), main.end(), [&](const std::string& a, const std::string& b) {
    return std::find(order.begin(), order.end(), a) < std::find(order.begin(), order.end(), b);
  });

  int extra = -1;
  if (policy.kind == ExtraLabelPolicy::Kind::Merge) {
    if (policy.merge_into == main[0]) {
      extra = 0;
    } else if (policy.merge_into == main[1]) {
      extra = 1;
    } else {
      throw DataError("labels: merge target '" + policy.merge_into + "' is not a main class");
    }
  }
  std::vector<int> out;
  out.reserve(raw.size());
  for (const auto& l : raw) out.push_back(l == main[0] ? 0 : l == main[1] ? 1 : extra);
  return out;
}

// ---------------------------------------------------------------------------
// Numbers

/// Shortest decimal that round-trips, rounded to 10 significant digits when
/// the shortest form is longer.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  std::size_t digits = 0;
  bool leading = true;
  for (char ch : s) {
    if (ch == 'e' || ch == 'E') break;
    if (ch >= '0' && ch <= '9') {
      if (ch != '0') leading = false;
      if (!leading) ++digits;
    }
  }
  if (digits <= 10) return s;
  res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 10);
  return std::string(buf, res.ptr);
}

inline std::string format_optional(const std::optional<double>& x) {
  return x ? format_double(*x) : std::string();
}

inline double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return HUGE_VAL;
  if (s == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError("not a number: '" + s + "'");
  }
  return v;
}

inline std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

inline std::uint64_t parse_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError("not an unsigned integer: '" + s + "'");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Result rows

struct SweepRow {
  double p = 0.0;
  double q = 0.0;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::optional<double> lambda2_over_n;
  std::optional<double> detectability;
  std::optional<double> p_star_realized;  // equal sizes only
  std::string regime;                     // assessment of the detected split
  std::optional<double> p_lb;
  std::optional<double> p_ub;
  std::optional<double> c_star;
  std::optional<double> sign_agreement_1;
  std::optional<double> sign_agreement_2;
  std::optional<double> ones_projection_1;
  std::optional<double> ones_projection_2;
  std::optional<double> opposite_signs;  // 1 when majority signs differ
  std::string status = "ok";

  static constexpr std::string_view kVersion = "# specphase-sweep v1";
  static constexpr std::string_view kHeader =
      "p,q,trial,seed,lambda2_over_n,detectability,p_star_realized,regime,p_lb,p_ub,c_star,"
      "sign_agreement_1,sign_agreement_2,ones_projection_1,ones_projection_2,opposite_signs,"
      "status";

  std::string to_csv() const {
    std::string s;
    s += format_double(p) + "," + format_double(q) + "," + std::to_string(trial) + "," +
         std::to_string(seed) + ",";
    s += format_optional(lambda2_over_n) + "," + format_optional(detectability) + "," +
         format_optional(p_star_realized) + "," + regime + ",";
    s += format_optional(p_lb) + "," + format_optional(p_ub) + "," + format_optional(c_star) + ",";
    s += format_optional(sign_agreement_1) + "," + format_optional(sign_agreement_2) + "," +
         format_optional(ones_projection_1) + "," + format_optional(ones_projection_2) + "," +
         format_optional(opposite_signs) + "," + status;
    return s;
  }

  static SweepRow from_csv(const std::vector<std::string>& f) {
    if (f.size() != 17) throw DataError("sweep row: expected 17 fields");
    SweepRow r;
    r.p = parse_double(f[0]);
    r.q = parse_double(f[1]);
    r.trial = parse_u64(f[2]);
    r.seed = parse_u64(f[3]);
    r.lambda2_over_n = parse_optional(f[4]);
    r.detectability = parse_optional(f[5]);
    r.p_star_realized = parse_optional(f[6]);
    r.regime = f[7];
    r.p_lb = parse_optional(f[8]);
    r.p_ub = parse_optional(f[9]);
    r.c_star = parse_optional(f[10]);
    r.sign_agreement_1 = parse_optional(f[11]);
    r.sign_agreement_2 = parse_optional(f[12]);
    r.ones_projection_1 = parse_optional(f[13]);
    r.ones_projection_2 = parse_optional(f[14]);
    r.opposite_signs = parse_optional(f[15]);
    r.status = f[16];
    return r;
  }

  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct AssessRow {
  double q = 0.0;
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::optional<double> n1_hat;
  std::optional<double> n2_hat;
  std::optional<double> p_hat;
  std::optional<double> p_hat_lb;
  std::optional<double> p_hat_ub;
  std::string regime;  // reliable|intermediate|unreliable|degenerate
  std::optional<double> detectability;
  std::optional<double> lambda2;
  std::string status = "ok";

  static constexpr std::string_view kVersion = "# specphase-assess v1";
  static constexpr std::string_view kHeader =
      "q,trial,seed,n1_hat,n2_hat,p_hat,p_hat_lb,p_hat_ub,regime,detectability,lambda2,status";

  std::string to_csv() const {
    return format_double(q) + "," + std::to_string(trial) + "," + std::to_string(seed) + "," +
           format_optional(n1_hat) + "," + format_optional(n2_hat) + "," +
           format_optional(p_hat) + "," + format_optional(p_hat_lb) + "," +
           format_optional(p_hat_ub) + "," + regime + "," + format_optional(detectability) + "," +
           format_optional(lambda2) + "," + status;
  }

  static AssessRow from_csv(const std::vector<std::string>& f) {
    if (f.size() != 12) throw DataError("assess row: expected 12 fields");
    AssessRow r;
    r.q = parse_double(f[0]);
    r.trial = parse_u64(f[1]);
    r.seed = parse_u64(f[2]);
    r.n1_hat = parse_optional(f[3]);
    r.n2_hat = parse_optional(f[4]);
    r.p_hat = parse_optional(f[5]);
    r.p_hat_lb = parse_optional(f[6]);
    r.p_hat_ub = parse_optional(f[7]);
    r.regime = f[8];
    r.detectability = parse_optional(f[9]);
    r.lambda2 = parse_optional(f[10]);
    r.status = f[11];
    return r;
  }

  friend bool operator==(const AssessRow&, const AssessRow&) = default;
};

/// Summary tables are free-form: a fixed header plus preformatted rows.
struct SummaryTable {
  std::string version;
  std::string header;
  std::vector<std::vector<std::string>> rows;
};

template <typename Row>
std::string format_rows(std::span<const Row> rows) {
  std::string out;
  out += Row::kVersion;
  out += "\n";
  out += Row::kHeader;
  out += "\n";
  for (const auto& r : rows) out += r.to_csv() + "\n";
  return out;
}

template <typename Row>
std::vector<Row> parse_rows(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != Row::kVersion) {
    throw DataError("missing version line '" + std::string(Row::kVersion) + "'");
  }
  if (!std::getline(in, line) || line != Row::kHeader) throw DataError("unexpected CSV header");
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto comma = line.find(',', start);
      fields.push_back(line.substr(start, comma == std::string::npos ? std::string::npos
                                                                      : comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    rows.push_back(Row::from_csv(fields));
  }
  return rows;
}

inline std::string format_summary(const SummaryTable& t) {
  std::string out = t.version + "\n" + t.header + "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += row[i];
    }
    out += "\n";
  }
  return out;
}

inline void write_sweep_csv(std::span<const SweepRow> rows, const std::filesystem::path& path) {
  write_file_atomic(path, format_rows(rows));
}

inline void write_assess_csv(std::span<const AssessRow> rows, const std::filesystem::path& path) {
  write_file_atomic(path, format_rows(rows));
}

inline std::vector<SweepRow> read_sweep_csv(const std::filesystem::path& path) {
  auto in = detail::open_in(path);
  return parse_rows<SweepRow>(in);
}

// ---------------------------------------------------------------------------
// key=value documents

using KeyValues = std::vector<std::pair<std::string, std::string>>;

inline std::string format_key_values(const KeyValues& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw DataError("line " + std::to_string(lineno) + ": expected key=value");
    }
    out[std::string(detail::trim(body.substr(0, eq)))] =
        std::string(detail::trim(body.substr(eq + 1)));
  }
  return out;
}

inline KeyValues params_manifest(const GenParams& p) {
  return {{"n1", std::to_string(p.n1)},    {"n2", std::to_string(p.n2)},
          {"p1", format_double(p.p1)},     {"p2", format_double(p.p2)},
          {"p", format_double(p.p)},       {"q", format_double(p.q)},
          {"seed", std::to_string(p.seed)}, {"noise_scope", to_string(p.noise_scope)}};
}

inline GenParams parse_params_manifest(std::istream& in) {
  const auto kv = parse_key_values(in);
  auto get = [&](const char* key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw DataError(std::string("params manifest: missing '") + key + "'");
    return it->second;
  };
  GenParams p;
  p.n1 = parse_u64(get("n1"));
  p.n2 = parse_u64(get("n2"));
  p.p1 = parse_double(get("p1"));
  p.p2 = parse_double(get("p2"));
  p.p = parse_double(get("p"));
  p.q = parse_double(get("q"));
  p.seed = parse_u64(get("seed"));
  p.noise_scope = parse_noise_scope(get("noise_scope"));
  p.validate();
  return p;
}

inline KeyValues report_fields(const AssessmentReport& r) {
  return {{"n1_hat", std::to_string(r.sizes[0])},
          {"n2_hat", std::to_string(r.sizes[1])},
          {"lambda2_hat_1", format_double(r.lambda2_hats[0])},
          {"lambda2_hat_2", format_double(r.lambda2_hats[1])},
          {"p_hat", format_double(r.p_hat)},
          {"p_hat_lb", format_double(r.p_hat_lb)},
          {"p_hat_ub", format_double(r.p_hat_ub)},
          {"regime", to_string(r.regime)}};
}

inline void write_report(const AssessmentReport& r, const std::filesystem::path& path) {
  write_file_atomic(path, format_key_values(report_fields(r)));
}

}  // namespace specphase
