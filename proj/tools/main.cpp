#include <CLI11.hpp>
#include <iostream>

#include "cli.hpp"
#include "hlsforge/error.hpp"

using namespace hlsforge;
using namespace hlsforge::cli;

namespace {

int with_config(const std::string& path, const std::function<int(const RunConfig&)>& run) {
  try {
    return run(load_run_config(path));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hlsforge: HLS design-space dataset generation"};
  app.require_subcommand(1);

  std::string config;
  auto* expand = app.add_subcommand("expand", "lower abstract designs into concrete designs");
  expand->add_option("config", config, "run config (JSON)")->required();

  auto* build = app.add_subcommand("build", "run the configured tool flows over the post-frontend designs");
  build->add_option("config", config, "run config (JSON)")->required();

  AggregateOptions agg;
  std::string format = "csv";
  std::string agg_out;
  std::string archive;
  auto* aggregate = app.add_subcommand("aggregate", "collect per-design data into one table");
  aggregate->add_option("config", config, "run config (JSON)")->required();
  aggregate->add_option("--format", format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
  aggregate->add_option("-o,--output", agg_out, "table path (default <work_dir>/dataset.<ext>)");
  aggregate->add_option("--archive", archive, "also write a zip archive of the workspace");
  aggregate->add_flag("--include-artifacts", agg.include_artifacts, "archive hls_prj/ trees too");

  std::string table_a;
  std::string table_b;
  std::string metrics;
  std::string json_out;
  RegressOptions reg;
  auto* regress = app.add_subcommand("regress", "paired Wilcoxon tests between two tool-version tables");
  regress->add_option("table_a", table_a)->required();
  regress->add_option("table_b", table_b)->required();
  regress->add_option("--metrics", metrics, "comma-separated column names");
  regress->add_option("--alpha", reg.alpha, "significance level")->check(CLI::Range(0.0, 1.0));
  regress->add_option("--json", json_out, "write the JSON report here instead of stdout");

  std::string stats_table;
  std::string group_by = "base_design";
  StatsOptions st;
  std::string stats_metrics;
  auto* stats = app.add_subcommand("stats", "coverage summary and histograms of a table");
  stats->add_option("table", stats_table)->required();
  stats->add_option("--group-by", group_by)->check(CLI::IsMember({"base_design", "dataset"}));
  stats->add_option("--metrics", stats_metrics, "comma-separated column names");
  stats->add_option("--bins", st.bins)->check(CLI::PositiveNumber);

  DemoOptions demo;
  std::string demo_out = demo.out_dir.string();
  std::string strategy = "fine_grained";
  auto* demo_cmd = app.add_subcommand("demo", "self-contained run over the bundled designs with mock flows");
  demo_cmd->add_option("--out", demo_out, "output directory");
  demo_cmd->add_option("--seed", demo.seed);
  demo_cmd->add_option("--samples", demo.n_samples)->check(CLI::PositiveNumber);
  demo_cmd->add_option("-j,--workers", demo.n_workers)->check(CLI::PositiveNumber);
  demo_cmd->add_option("--strategy", strategy)->check(CLI::IsMember({"naive", "fine_grained"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfigError;
  }

  auto split_list = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');) {
      if (!item.empty()) out.push_back(item);
    }
    return out;
  };

  if (expand->parsed()) {
    return with_config(config, [](const RunConfig& c) { return cmd_expand(c, std::cout, std::cerr); });
  }
  if (build->parsed()) {
    return with_config(config, [](const RunConfig& c) { return cmd_build(c, std::cout, std::cerr); });
  }
  if (aggregate->parsed()) {
    agg.format = parse_table_format(format);
    if (!agg_out.empty()) agg.output = agg_out;
    if (!archive.empty()) agg.archive = archive;
    return with_config(config, [&](const RunConfig& c) { return cmd_aggregate(c, agg, std::cout, std::cerr); });
  }
  if (regress->parsed()) {
    reg.metrics = split_list(metrics);
    if (!json_out.empty()) reg.json_out = json_out;
    return cmd_regress(table_a, table_b, reg, std::cout, std::cerr);
  }
  if (stats->parsed()) {
    st.group_by = parse_group_by(group_by);
    if (!stats_metrics.empty()) st.metrics = split_list(stats_metrics);
    return cmd_stats(stats_table, st, std::cout, std::cerr);
  }
  demo.out_dir = demo_out;
  demo.strategy = parse_strategy(strategy);
  return cmd_demo(demo, std::cout, std::cerr);
}
