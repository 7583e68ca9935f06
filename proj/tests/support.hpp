#pragma once

// Shared helpers for the test binaries: scratch directories, fixture paths
// and the independent oracles the assertions are checked against.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hlsforge/manifest.hpp"
#include "hlsforge/metrics.hpp"
#include "hlsforge/optdsl.hpp"

namespace fs = std::filesystem;

namespace testing_support {

inline fs::path fixtures_dir() { return fs::path(HLSFORGE_TEST_FIXTURES); }
inline fs::path stubs_dir() { return fs::path(HLSFORGE_TEST_STUBS); }
inline fs::path designs_fixture() { return fixtures_dir() / "designs"; }

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = fs::temp_directory_path() /
            ("hlsforge_test_" + std::to_string(rd()) + "_" + std::to_string(counter.fetch_add(1)));
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  fs::path path_;
};

inline const char* kLoopOptTemplate =
    "loop_opt,3,2\n"
    "0,lp2,pipeline,unroll,[1 2 4 8]\n"
    "1,lp3,pipeline,unroll,[1 2 4 8]\n"
    "2,lp3,,unroll,[1 2 4 8]\n"
    "set_directive_unroll -factor [factor] k2mm/[name]\n"
    "set_directive_pipeline k2mm/[name]\n";

// --- OptDSL oracle ---------------------------------------------------------

inline std::string selection_key(const std::string& group, const std::string& label, std::size_t line,
                                 const std::string& choice) {
  return group + "|" + label + "|" + std::to_string(line) + "|" + choice;
}

inline std::string assignment_key(const hlsforge::DirectiveAssignment& a) {
  std::vector<std::string> parts;
  for (const auto& s : a.selections) parts.push_back(selection_key(s.group, s.label, s.line_index, s.choice));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& p : parts) out += p + ";";
  return out;
}

/// Recursive product over (group, label) axes, where every (line, choice) of
/// lines sharing a label is one alternative.
inline std::set<std::string> brute_force_space(const hlsforge::OptTemplate& t) {
  std::map<std::pair<std::string, std::string>, std::vector<std::string>> axes;
  for (const auto& g : t.groups) {
    for (std::size_t i = 0; i < g.lines.size(); ++i) {
      for (const auto& c : g.lines[i].choices) {
        axes[{g.name, g.lines[i].label}].push_back(selection_key(g.name, g.lines[i].label, i, c));
      }
    }
  }
  std::vector<std::vector<std::string>> options;
  for (auto& [k, v] : axes) options.push_back(v);
  std::set<std::string> out;
  std::vector<std::string> current;
  auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == options.size()) {
      auto parts = current;
      std::sort(parts.begin(), parts.end());
      std::string key;
      for (const auto& p : parts) key += p + ";";
      out.insert(key);
      return;
    }
    for (const auto& o : options[depth]) {
      current.push_back(o);
      self(self, depth + 1);
      current.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

/// Random template with at most `max_axes` axes and `max_choices` choices per line.
inline std::string random_template(std::mt19937_64& rng, int max_axes = 4, int max_choices = 5) {
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n_axes = pick(1, max_axes);
  const int n_groups = std::min(n_axes, pick(1, 2));
  std::vector<int> axes_per_group(n_groups, 1);
  for (int a = n_groups; a < n_axes; ++a) ++axes_per_group[pick(0, n_groups - 1)];

  std::string text;
  int label_counter = 0;
  for (int g = 0; g < n_groups; ++g) {
    const bool arrays = pick(0, 3) == 0;
    std::vector<std::string> lines;
    for (int a = 0; a < axes_per_group[g]; ++a) {
      const std::string label = (arrays ? "arr" : "lp") + std::to_string(label_counter++);
      const int n_lines = arrays ? 1 : pick(1, 2);
      for (int l = 0; l < n_lines; ++l) {
        const int n_choices = pick(1, max_choices);
        std::string choices;
        for (int c = 0; c < n_choices; ++c) {
          if (c) choices += " ";
          choices += arrays ? "cyclic-" + std::to_string(c + 2) : std::to_string(1 << c);
        }
        const std::string fixed = (!arrays && l == 0 && n_lines == 2) ? "pipeline" : "";
        lines.push_back(std::string(arrays ? "array_partition" : "unroll") + "|" + label + "|" + fixed + "|" + choices);
      }
    }
    const std::string name = arrays ? "array_opt" + std::to_string(g) : "loop_opt" + std::to_string(g);
    const int n_templates = arrays ? 1 : 2;
    text += name + "," + std::to_string(lines.size()) + "," + std::to_string(n_templates) + "\n";
    for (std::size_t i = 0; i < lines.size(); ++i) {
      std::stringstream ss(lines[i]);
      std::string kind, label, fixed, choices;
      std::getline(ss, kind, '|');
      std::getline(ss, label, '|');
      std::getline(ss, fixed, '|');
      std::getline(ss, choices, '|');
      text += std::to_string(i) + "," + label + "," + fixed + "," + kind + ",[" + choices + "]\n";
    }
    if (arrays) {
      text += "set_directive_array_partition -type [type] -factor [factor] top/[name]\n";
    } else {
      text += "set_directive_unroll -factor [factor] top/[name]\n";
      text += "set_directive_pipeline top/[name]\n";
    }
  }
  return text;
}

// --- Wilcoxon oracle -------------------------------------------------------

/// Exact two-tailed p by enumerating all 2^n sign patterns of the ranks.
inline double brute_force_wilcoxon_p(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] - b[i] != 0.0) d.push_back(a[i] - b[i]);
  }
  const std::size_t n = d.size();
  if (n == 0) return 1.0;
  std::vector<double> rank(n);
  for (std::size_t i = 0; i < n; ++i) {
    double less = 0, equal = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(d[j]) < std::abs(d[i])) ++less;
      if (std::abs(d[j]) == std::abs(d[i])) ++equal;
    }
    rank[i] = less + (equal + 1) / 2.0;
  }
  double w_plus = 0, w_minus = 0;
  for (std::size_t i = 0; i < n; ++i) (d[i] > 0 ? w_plus : w_minus) += rank[i];
  const double w = std::min(w_plus, w_minus);
  double total = 0;
  for (double r : rank) total += r;
  std::uint64_t hits = 0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) s += rank[i];
    }
    if (std::min(s, total - s) <= w + 1e-9) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(std::uint64_t{1} << n);
}

// --- Cost-model oracle -----------------------------------------------------

struct HandDirectives {
  std::map<std::string, long long> unroll;
  std::set<std::string> pipelined;
  std::map<std::string, long long> banks;
};

/// Reads `set_directive_*` lines with plain string splitting.
inline HandDirectives hand_parse_opt_tcl(const std::string& text, const hlsforge::MockManifest& m) {
  HandDirectives h;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const auto target = tok.back().substr(tok.back().find('/') + 1);
    auto opt = [&](const std::string& flag) -> std::string {
      for (std::size_t i = 0; i + 1 < tok.size(); ++i) {
        if (tok[i] == flag) return tok[i + 1];
      }
      return "";
    };
    if (tok[0] == "set_directive_unroll") h.unroll[target] = std::stoll(opt("-factor"));
    if (tok[0] == "set_directive_pipeline") h.pipelined.insert(target);
    if (tok[0] == "set_directive_array_partition") {
      h.banks[target] = opt("-type") == "complete" ? m.find_array(target)->depth : std::stoll(opt("-factor"));
    }
  }
  return h;
}

/// The HLS cost model written out with its literal constants.
inline hlsforge::HlsSynthMetrics hand_cost_model(const hlsforge::MockManifest& m, const HandDirectives& h) {
  long long latency = 0, dsp = 0, max_u = 1, bram = 0;
  double lut = static_cast<double>(m.base_lut), ff = static_cast<double>(m.base_ff);
  for (const auto& l : m.loops) {
    const long long u = h.unroll.count(l.label) ? h.unroll.at(l.label) : 1;
    const long long iters = (l.trip_count + u - 1) / u;
    latency += h.pipelined.count(l.label) ? iters - 1 + l.body_ops : iters * l.body_ops;
    lut += 25.0 * l.body_ops * u;
    ff += 15.0 * l.body_ops * u;
    dsp += l.mult_ops * u;
    max_u = std::max(max_u, u);
  }
  for (const auto& a : m.arrays) {
    const long long banks = h.banks.count(a.label) ? h.banks.at(a.label) : 1;
    bram += (a.depth * a.elem_bytes + 2047) / 2048 * banks;
  }
  hlsforge::HlsSynthMetrics out;
  out.latency_best_cycles = latency;
  out.latency_avg_cycles = latency;
  out.latency_worst_cycles = 2 * latency;
  out.ii = latency + 1;
  out.clock_estimate_ns = 3.0 + 0.2 * std::log2(static_cast<double>(max_u));
  out.lut = std::llround(lut);
  out.ff = std::llround(ff);
  out.dsp = dsp;
  out.bram = bram;
  out.uram = 0;
  return out;
}

// --- Randomized metric bundles --------------------------------------------

inline hlsforge::MetricsBundle random_bundle(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> big(0, 5'000'000);
  std::uniform_real_distribution<double> real(-50.0, 50.0);
  std::bernoulli_distribution coin(0.5);
  hlsforge::MetricsBundle b;
  if (coin(rng)) {
    hlsforge::HlsSynthMetrics h;
    if (coin(rng)) h.latency_best_cycles = big(rng);
    if (coin(rng)) h.latency_avg_cycles = big(rng);
    if (coin(rng)) h.latency_worst_cycles = big(rng);
    if (coin(rng)) h.ii = big(rng);
    h.clock_estimate_ns = std::abs(real(rng));
    h.lut = big(rng);
    h.ff = big(rng);
    h.dsp = big(rng);
    h.bram = big(rng);
    h.uram = big(rng);
    b.hls = h;
  }
  if (coin(rng)) {
    hlsforge::ImplMetrics m;
    m.wns_ns = real(rng);
    m.whs_ns = real(rng);
    m.lut = big(rng);
    m.ff = big(rng);
    m.dsp = big(rng);
    m.bram = big(rng);
    m.total_power_w = std::abs(real(rng)) / 3.0;
    b.impl = m;
  }
  if (coin(rng)) {
    hlsforge::ExecutionMeta e;
    e.tool_name = "tool" + std::to_string(big(rng) % 7);
    e.tool_version = "v" + std::to_string(big(rng) % 100) + ".\"q\"";
    e.runtime_s = std::abs(real(rng)) * 123.456;
    e.status = static_cast<hlsforge::FlowStatus>(big(rng) % 4);
    b.execution = e;
  }
  return b;
}

}  // namespace testing_support
