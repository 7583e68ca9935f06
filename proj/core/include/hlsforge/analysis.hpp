#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hlsforge/aggregate.hpp"

namespace hlsforge {

enum class WilcoxonMethod { exact, normal_approx };

std::string_view to_string(WilcoxonMethod method);

struct WilcoxonResult {
  double w_statistic = 0.0;
  double p_two_tailed = 1.0;
  int n_effective = 0;
  WilcoxonMethod method = WilcoxonMethod::exact;
};

/// Largest n_effective handled by exact enumeration.
inline constexpr int kWilcoxonExactLimit = 25;

/// Paired two-tailed signed-rank test on d = a - b. Zero differences are
/// dropped, tied |d| get average ranks, W = min(W+, W-).
/// Throws LengthMismatch, EmptyInput; InvalidArgument for alpha outside (0, 1).
/// `exact_limit` moves the switch to the normal approximation.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b,
                                    double alpha = 0.05, int exact_limit = kWilcoxonExactLimit);

struct MetricComparison {
  std::string metric;
  std::optional<double> mean_a, mean_b, median_a, median_b;
  std::size_t n_pairs = 0;
  WilcoxonResult test;
  bool significant = false;
};

struct RegressionReport {
  double alpha = 0.05;
  std::size_t n_paired_designs = 0;
  std::size_t unpaired_a = 0;
  std::size_t unpaired_b = 0;
  std::vector<MetricComparison> metrics;
};

/// Joins on design_id. Throws NoPairs when no design_id is shared.
RegressionReport compare_tool_versions(const std::vector<TableRow>& rows_a, const std::vector<TableRow>& rows_b,
                                       const std::vector<std::string>& metrics, double alpha = 0.05);

std::string regression_report_json(const RegressionReport& report);
/// Fixed-width table; significant p-values carry a trailing `*`.
std::string regression_report_table(const RegressionReport& report);

/// Throws LengthMismatch, EmptyInput, DegenerateTruth.
double compute_rae(const std::vector<double>& pred, const std::vector<double>& truth);
double compute_r2(const std::vector<double>& pred, const std::vector<double>& truth);

/// Inclusive linear interpolation at position p * (n - 1) of sorted values.
double quantile_sorted(const std::vector<double>& sorted, double p);

struct Distribution {
  std::size_t count = 0;
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

Distribution describe(std::vector<double> values);

enum class GroupBy { base_design, dataset };

GroupBy parse_group_by(std::string_view text);

struct CoverageEntry {
  std::string group;
  std::string metric;
  Distribution dist;
};

struct CoverageSummary {
  std::vector<CoverageEntry> entries;  ///< sorted by (group, metric)

  const Distribution* find(std::string_view group, std::string_view metric) const;
};

/// Groups with no non-null value for a metric are omitted for that metric.
CoverageSummary coverage_summary(const std::vector<TableRow>& rows, GroupBy group_by,
                                 const std::vector<std::string>& metrics);

std::string coverage_summary_json(const CoverageSummary& summary);

struct HistogramBin {
  double lo = 0;
  double hi = 0;
  std::size_t count = 0;

  bool operator==(const HistogramBin&) const = default;
};

/// Equal-width bins over [min, max]; max lands in the last bin.
/// Throws EmptyValues, InvalidArgument (n_bins < 1).
std::vector<HistogramBin> histogram(const std::vector<double>& values, int n_bins);

}  // namespace hlsforge
