// Copyright 2026 The aebsim Authors
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

// Command line front end: run, sweep, compare, plot, replay.

#include <CLI11.hpp>
#include <fmt/chrono.h>
#include <fmt/format.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "aebsim/config.hpp"
#include "aebsim/error.hpp"
#include "aebsim/harness.hpp"
#include "aebsim/svg.hpp"
#include "aebsim/trace_io.hpp"

namespace fs = std::filesystem;
using namespace aebsim;

namespace
{

struct Overrides
{
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::optional<std::string> verbosity;
  std::optional<int> runs;
};

void add_override_flags(CLI::App * cmd, Overrides & o)
{
  cmd->add_option("-o,--out", o.out, "Output directory");
  cmd->add_option("-s,--seed", o.seed, "Root seed override");
  cmd->add_option("-j,--jobs", o.jobs, "Worker threads");
  cmd->add_option("-v,--verbosity", o.verbosity, "full or metrics")
    ->check(CLI::IsMember({"full", "metrics"}));
  cmd->add_option("-n,--runs", o.runs, "Runs per family override");
}

void apply_overrides(Json & j, const Overrides & o)
{
  if (o.out) {
    j["output_dir"] = *o.out;
  }
  if (o.seed) {
    j["root_seed"] = *o.seed;
  }
  if (o.jobs) {
    j["parallelism"] = *o.jobs;
  }
  if (o.verbosity) {
    j["verbosity"] = *o.verbosity;
  }
  if (o.runs) {
    j["runs_per_family"] = *o.runs;
  }
}

std::string timestamp()
{
  return fmt::format("{:%Y-%m-%dT%H:%M:%S}", fmt::localtime(std::time(nullptr)));
}

/// Executes one experiment; returns the number of failed assertions.
int run_experiment(const ExperimentConfig & cfg, std::vector<RunRecord> * records_out = nullptr)
{
  prepare_output_dir(cfg.output_dir);
  const auto start = std::chrono::steady_clock::now();
  const std::string started = timestamp();
  const auto descriptors = plan(cfg);
  const auto results = execute(cfg, descriptors, cfg.parallelism, cfg.verbosity == Verbosity::kFull);
  emit_outputs(results, cfg);
  const double wall =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<RunRecord> records;
  std::size_t failed_runs = 0;
  for (const auto & r : results) {
    records.push_back(r.record);
    failed_runs += r.record.metrics ? 0 : 1;
  }
  write_text(
    cfg.output_dir / "run.log",
    fmt::format(
      "started {}\nfinished {}\nruns {}\nfailed_runs {}\nwall_seconds {:.3f}\nthreads {}\n", started,
      timestamp(), results.size(), failed_runs, wall, cfg.parallelism));

  int failed = 0;
  for (const auto & o : check_assertions(cfg.assertions, records)) {
    fmt::print(
      "{} {}/{} {} {} {} (observed {:.4g})\n", o.passed ? "PASS" : "FAIL", o.assertion.family,
      o.assertion.condition, o.assertion.metric, o.assertion.op, o.assertion.value, o.observed);
    failed += o.passed ? 0 : 1;
  }
  fmt::print(
    "{}: {} runs ({} faulted) in {:.1f} s -> {}\n", cfg.name, results.size(), failed_runs, wall,
    cfg.output_dir.string());
  if (records_out) {
    *records_out = std::move(records);
  }
  return failed + (failed_runs > 0 ? 1 : 0);
}

std::vector<double> sweep_values(
  const std::vector<double> & values, std::optional<double> from, std::optional<double> to, int steps)
{
  if (!values.empty()) {
    return values;
  }
  if (!from || !to || steps < 1) {
    throw ConfigError("sweep: give --values or --from/--to/--steps");
  }
  std::vector<double> out;
  for (int i = 0; i < steps; ++i) {
    out.push_back(steps == 1 ? *from : *from + (*to - *from) * i / (steps - 1));
  }
  return out;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Closed-loop ACC/AEB simulator with perception fault injection"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides over;
  auto * run = app.add_subcommand("run", "Execute an experiment config");
  run->add_option("-c,--config", config_path, "Experiment JSON")->required()->check(CLI::ExistingFile);
  add_override_flags(run, over);

  std::string sweep_param;
  std::vector<double> sweep_vals;
  std::optional<double> sweep_from, sweep_to;
  int sweep_steps = 0;
  auto * sweep = app.add_subcommand("sweep", "Vary one config parameter");
  sweep->add_option("-c,--config", config_path, "Experiment JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("-p,--param", sweep_param, "JSON pointer, e.g. /pipeline/aeb/ttc_threshold")
    ->required();
  sweep->add_option("--values", sweep_vals, "Explicit values")->delimiter(',');
  sweep->add_option("--from", sweep_from, "Range start");
  sweep->add_option("--to", sweep_to, "Range end");
  sweep->add_option("--steps", sweep_steps, "Number of points");
  add_override_flags(sweep, over);

  std::string metrics_path;
  std::vector<std::string> labels;
  std::optional<std::string> compare_out;
  auto * compare = app.add_subcommand("compare", "Tabulate conditions side by side");
  compare->add_option("-m,--metrics", metrics_path, "metrics.jsonl")->required()->check(CLI::ExistingFile);
  compare->add_option("-l,--labels", labels, "Condition labels, reference first")->required()->expected(2, -1);
  compare->add_option("-o,--out", compare_out, "Write CSV here instead of stdout");

  std::string plot_out;
  auto * plot = app.add_subcommand("plot", "Regenerate charts from stored records");
  plot->add_option("-m,--metrics", metrics_path, "metrics.jsonl")->required()->check(CLI::ExistingFile);
  plot->add_option("-o,--out", plot_out, "Chart directory")->required();

  std::string trace_path;
  std::optional<std::string> replay_metrics;
  std::optional<std::string> chart_path;
  auto * rep = app.add_subcommand("replay", "Recompute metrics from one stored trace");
  rep->add_option("-t,--trace", trace_path, "Trace CSV")->required();
  rep->add_option("-m,--metrics", replay_metrics, "metrics.jsonl to compare against");
  rep->add_option("--chart", chart_path, "Render a time-series SVG");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      Json j = read_experiment_json(config_path);
      apply_overrides(j, over);
      return run_experiment(parse_experiment(j)) == 0 ? 0 : 1;
    }
    if (sweep->parsed()) {
      Json base = read_experiment_json(config_path);
      apply_overrides(base, over);
      const auto values = sweep_values(sweep_vals, sweep_from, sweep_to, sweep_steps);
      const fs::path root = base.value("output_dir", "out");
      prepare_output_dir(root);
      std::string table = "value,family,condition,runs,collision_rate,eb_rate,false_eb_rate,"
                          "oscillatory_rate,mean_abs_jerk_mean,travel_time_mean\n";
      int failed = 0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        Json j = base;
        apply_override(j, sweep_param, values[i]);
        j["output_dir"] = (root / fmt::format("point_{:02d}", i)).string();
        std::vector<RunRecord> records;
        failed += run_experiment(parse_experiment(j), &records);
        for (const auto & g : summarize_pooled(records)) {
          table += fmt::format(
            "{:.17g},{},{},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", values[i], g.family,
            g.condition, g.runs, g.collision.rate, g.eb.rate, g.false_eb.rate, g.oscillatory.rate,
            g.mean_abs_jerk.mean, g.travel_time.mean);
        }
      }
      write_text(root / "sweep.csv", table);
      return failed == 0 ? 0 : 1;
    }
    if (compare->parsed()) {
      const auto table = comparison_table(read_records(metrics_path), labels);
      if (compare_out) {
        write_text(*compare_out, table);
      } else {
        std::cout << table;
      }
      return 0;
    }
    if (plot->parsed()) {
      write_charts(read_records(metrics_path), plot_out);
      return 0;
    }
    if (rep->parsed()) {
      std::optional<fs::path> mpath;
      if (replay_metrics) {
        mpath = *replay_metrics;
      }
      const auto report = replay(trace_path, mpath);
      std::cout << metrics_to_json(report.recomputed).dump(2) << "\n";
      if (chart_path) {
        const RunTrace trace = read_trace(trace_path);
        std::vector<double> t;
        svg::Line v{"v [m/s]", {}}, a{"a_cmd [m/s^2]", {}}, g{"truth gap [m]", {}},
          p{"perceived gap [m]", {}};
        for (const auto & r : trace.rows) {
          t.push_back(r.t);
          v.y.push_back(r.v);
          a.y.push_back(r.a_cmd);
          g.y.push_back(r.truth_gap);
          p.y.push_back(r.perceived_gap);
        }
        write_text(
          *chart_path,
          svg::time_series(
            fmt::format("{} seed {} ({})", trace.meta.family, trace.meta.seed, trace.meta.condition),
            t, {v, a, g, p}));
      }
      if (mpath) {
        if (report.matches) {
          std::cout << "replay: stored record matches\n";
        } else {
          for (const auto & m : report.mismatches) {
            std::cout << "replay mismatch: " << m << "\n";
          }
          return 1;
        }
      }
      return 0;
    }
  } catch (const ConfigError & e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
