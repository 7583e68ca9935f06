#include "hlsforge/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <map>
#include <numeric>
#include <set>

#include "hlsforge/error.hpp"
#include "hlsforge/fsutil.hpp"

namespace hlsforge {

using ordered_json = nlohmann::ordered_json;

std::string_view to_string(WilcoxonMethod method) {
  return method == WilcoxonMethod::exact ? "exact" : "normal_approx";
}

namespace {

void check_pair(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::LengthMismatch,
                "lengths " + std::to_string(a.size()) + " and " + std::to_string(b.size()) + " differ");
  }
  if (a.empty()) throw Error(ErrorCode::EmptyInput, "no values");
}

double mean_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

// P(min(S+, S-) <= w2) with S+ over all 2^n sign patterns; ranks are doubled.
double exact_p(const std::vector<int>& ranks2, long w2) {
  const long total = std::accumulate(ranks2.begin(), ranks2.end(), 0L);
  std::vector<double> dist(total + 1, 0.0);
  dist[0] = 1.0;
  long reach = 0;
  for (int r : ranks2) {
    for (long s = reach; s >= 0; --s) {
      if (dist[s] != 0.0) dist[s + r] += dist[s];
    }
    reach += r;
  }
  double hits = 0.0;
  for (long s = 0; s <= total; ++s) {
    if (std::min(s, total - s) <= w2) hits += dist[s];
  }
  return std::min(1.0, hits / std::ldexp(1.0, static_cast<int>(ranks2.size())));
}

std::optional<double> opt_mean(const std::vector<double>& v) {
  if (v.empty()) return std::nullopt;
  return mean_of(v);
}

std::optional<double> opt_median(std::vector<double> v) {
  if (v.empty()) return std::nullopt;
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, 0.5);
}

ordered_json opt_json(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

std::string fixed(const std::optional<double>& v, int precision) {
  if (!v) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, *v);
  return buf;
}

std::string pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return left ? s + fill : fill + s;
}

}  // namespace

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b, double alpha,
                                    int exact_limit) {
  check_pair(a, b);
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");

  std::vector<double> d;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    if (diff != 0.0) d.push_back(diff);
  }
  WilcoxonResult result;
  result.n_effective = static_cast<int>(d.size());
  if (d.empty()) return result;

  const std::size_t n = d.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto i, auto j) { return std::abs(d[i]) < std::abs(d[j]); });

  // Doubled average ranks keep tie handling in integers.
  std::vector<int> ranks2(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const int r2 = static_cast<int>(i + j + 2);  // (i+1) + (j+1)
    for (std::size_t k = i; k <= j; ++k) ranks2[order[k]] = r2;
    const double t = static_cast<double>(j - i + 1);
    tie_term += t * t * t - t;
    i = j + 1;
  }
  long w_plus2 = 0;
  long w_minus2 = 0;
  for (std::size_t i = 0; i < n; ++i) (d[i] > 0 ? w_plus2 : w_minus2) += ranks2[i];
  const long w2 = std::min(w_plus2, w_minus2);
  result.w_statistic = w2 / 2.0;

  if (result.n_effective <= exact_limit) {
    result.method = WilcoxonMethod::exact;
    result.p_two_tailed = exact_p(ranks2, w2);
    return result;
  }
  result.method = WilcoxonMethod::normal_approx;
  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1) / 4.0;
  const double var = nn * (nn + 1) * (2 * nn + 1) / 24.0 - tie_term / 48.0;
  if (var <= 0.0) {
    result.p_two_tailed = 1.0;
    return result;
  }
  const double z = std::max(0.0, std::abs(result.w_statistic - mean) - 0.5) / std::sqrt(var);
  result.p_two_tailed = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return result;
}

RegressionReport compare_tool_versions(const std::vector<TableRow>& rows_a, const std::vector<TableRow>& rows_b,
                                       const std::vector<std::string>& metrics, double alpha) {
  for (const auto& m : metrics) column_index(m);
  auto index = [](const std::vector<TableRow>& rows) {
    std::map<std::string, const TableRow*> by_id;
    for (const auto& r : rows) {
      if (const auto id = r.text("design_id")) by_id.emplace(*id, &r);
    }
    return by_id;
  };
  const auto ia = index(rows_a);
  const auto ib = index(rows_b);
  std::vector<std::pair<const TableRow*, const TableRow*>> pairs;
  for (const auto& [id, row] : ia) {
    if (const auto it = ib.find(id); it != ib.end()) pairs.emplace_back(row, it->second);
  }
  if (pairs.empty()) throw Error(ErrorCode::NoPairs, "no design_id is shared by both tables");

  RegressionReport report;
  report.alpha = alpha;
  report.n_paired_designs = pairs.size();
  report.unpaired_a = rows_a.size() - pairs.size();
  report.unpaired_b = rows_b.size() - pairs.size();
  for (const auto& m : metrics) {
    std::vector<double> a;
    std::vector<double> b;
    for (const auto& [ra, rb] : pairs) {
      const auto va = ra->numeric(m);
      const auto vb = rb->numeric(m);
      if (va && vb) {
        a.push_back(*va);
        b.push_back(*vb);
      }
    }
    MetricComparison c;
    c.metric = m;
    c.n_pairs = a.size();
    c.mean_a = opt_mean(a);
    c.mean_b = opt_mean(b);
    c.median_a = opt_median(a);
    c.median_b = opt_median(b);
    if (!a.empty()) c.test = wilcoxon_signed_rank(a, b, alpha);
    c.significant = c.test.p_two_tailed < alpha;
    report.metrics.push_back(std::move(c));
  }
  return report;
}

std::string regression_report_json(const RegressionReport& report) {
  ordered_json j;
  j["alpha"] = report.alpha;
  j["n_paired_designs"] = report.n_paired_designs;
  j["unpaired_a"] = report.unpaired_a;
  j["unpaired_b"] = report.unpaired_b;
  auto& ms = j["metrics"] = ordered_json::array();
  for (const auto& c : report.metrics) {
    ordered_json o;
    o["metric"] = c.metric;
    o["n_pairs"] = c.n_pairs;
    o["mean_a"] = opt_json(c.mean_a);
    o["mean_b"] = opt_json(c.mean_b);
    o["median_a"] = opt_json(c.median_a);
    o["median_b"] = opt_json(c.median_b);
    o["w_statistic"] = c.test.w_statistic;
    o["p_two_tailed"] = c.test.p_two_tailed;
    o["n_effective"] = c.test.n_effective;
    o["method"] = std::string(to_string(c.test.method));
    o["significant"] = c.significant;
    ms.push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

std::string regression_report_table(const RegressionReport& report) {
  std::string out = pad("metric", 22, true) + pad("n", 5) + pad("mean_a", 14) + pad("mean_b", 14) +
                    pad("median_a", 14) + pad("median_b", 14) + pad("W", 10) + pad("p", 13) + "\n";
  for (const auto& c : report.metrics) {
    char p[32];
    std::snprintf(p, sizeof p, "%.4g", c.test.p_two_tailed);
    out += pad(c.metric, 22, true) + pad(std::to_string(c.n_pairs), 5) + pad(fixed(c.mean_a, 3), 14) +
           pad(fixed(c.mean_b, 3), 14) + pad(fixed(c.median_a, 3), 14) + pad(fixed(c.median_b, 3), 14) +
           pad(format_double(c.test.w_statistic), 10) + pad(std::string(p) + (c.significant ? "*" : " "), 13) + "\n";
  }
  out += "paired designs: " + std::to_string(report.n_paired_designs) +
         " (unpaired: " + std::to_string(report.unpaired_a) + " / " + std::to_string(report.unpaired_b) +
         "), * = p < " + format_double(report.alpha) + "\n";
  return out;
}

double compute_rae(const std::vector<double>& pred, const std::vector<double>& truth) {
  check_pair(pred, truth);
  const double m = mean_of(truth);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    num += std::abs(pred[i] - truth[i]);
    den += std::abs(truth[i] - m);
  }
  if (den == 0.0) throw Error(ErrorCode::DegenerateTruth, "truth values are all equal");
  return num / den;
}

double compute_r2(const std::vector<double>& pred, const std::vector<double>& truth) {
  check_pair(pred, truth);
  const double m = mean_of(truth);
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ss_res += (pred[i] - truth[i]) * (pred[i] - truth[i]);
    ss_tot += (truth[i] - m) * (truth[i] - m);
  }
  if (ss_tot == 0.0) throw Error(ErrorCode::DegenerateTruth, "truth values are all equal");
  return 1.0 - ss_res / ss_tot;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw Error(ErrorCode::EmptyValues, "quantile of no values");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Distribution describe(std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::EmptyValues, "no values to describe");
  std::sort(values.begin(), values.end());
  Distribution d;
  d.count = values.size();
  d.min = values.front();
  d.max = values.back();
  d.q1 = quantile_sorted(values, 0.25);
  d.median = quantile_sorted(values, 0.5);
  d.q3 = quantile_sorted(values, 0.75);
  return d;
}

GroupBy parse_group_by(std::string_view text) {
  if (text == "base_design") return GroupBy::base_design;
  if (text == "dataset") return GroupBy::dataset;
  throw Error(ErrorCode::InvalidArgument, "unknown grouping '" + std::string(text) + "'");
}

const Distribution* CoverageSummary::find(std::string_view group, std::string_view metric) const {
  for (const auto& e : entries) {
    if (e.group == group && e.metric == metric) return &e.dist;
  }
  return nullptr;
}

CoverageSummary coverage_summary(const std::vector<TableRow>& rows, GroupBy group_by,
                                 const std::vector<std::string>& metrics) {
  for (const auto& m : metrics) column_index(m);
  std::map<std::pair<std::string, std::string>, std::vector<double>> values;
  for (const auto& row : rows) {
    std::optional<std::string> key = group_by == GroupBy::dataset ? row.text("dataset") : row.text("base_name");
    if (!key && group_by == GroupBy::base_design) key = row.text("design_id");
    if (!key) continue;
    for (const auto& m : metrics) {
      if (const auto v = row.numeric(m)) values[{*key, m}].push_back(*v);
    }
  }
  CoverageSummary summary;
  for (auto& [key, v] : values) summary.entries.push_back({key.first, key.second, describe(std::move(v))});
  return summary;
}

std::string coverage_summary_json(const CoverageSummary& summary) {
  ordered_json j = ordered_json::array();
  for (const auto& e : summary.entries) {
    ordered_json o;
    o["group"] = e.group;
    o["metric"] = e.metric;
    o["count"] = e.dist.count;
    o["min"] = e.dist.min;
    o["q1"] = e.dist.q1;
    o["median"] = e.dist.median;
    o["q3"] = e.dist.q3;
    o["max"] = e.dist.max;
    j.push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

std::vector<HistogramBin> histogram(const std::vector<double>& values, int n_bins) {
  if (n_bins < 1) throw Error(ErrorCode::InvalidArgument, "n_bins must be >= 1");
  if (values.empty()) throw Error(ErrorCode::EmptyValues, "histogram of no values");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const double width = (hi - lo) / n_bins;
  std::vector<HistogramBin> bins(n_bins);
  for (int i = 0; i < n_bins; ++i) {
    bins[i].lo = lo + i * width;
    bins[i].hi = i + 1 == n_bins ? hi : lo + (i + 1) * width;
  }
  for (double v : values) {
    int idx = width > 0 ? static_cast<int>(std::floor((v - lo) / width)) : 0;
    idx = std::clamp(idx, 0, n_bins - 1);
    ++bins[idx].count;
  }
  return bins;
}

}  // namespace hlsforge
