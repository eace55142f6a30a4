// Copyright 2026 The edgecache Authors.
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

// Command-line front end: experiments, sweeps, the MovieLens pipeline, one-shot
// placement and stream export.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "edgecache/config.hpp"
#include "edgecache/data.hpp"
#include "edgecache/harness.hpp"
#include "edgecache/outputs.hpp"
#include "edgecache/ppp_asp.hpp"

using namespace edgecache;

namespace {

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::config:
    case ErrorKind::invalid_argument: return 2;
    case ErrorKind::data: return 3;
    case ErrorKind::numerical: return 4;
  }
  return 1;
}

struct Common {
  std::string config_path;
  std::uint64_t seed = 0;
  int runs = 0;
  std::string out;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "Config file (key = value)");
  cmd->add_option("--seed", c.seed, "Base seed");
  cmd->add_option("--runs", c.runs, "Monte-Carlo replications");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--set", c.overrides, "Extra key=value settings, applied after the file");
}

ExperimentConfig resolve(const Common& c, CLI::App* cmd) {
  ExperimentConfig cfg;
  if (!c.config_path.empty()) cfg = load_config(c.config_path);
  for (const auto& kv : c.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) fail(ErrorKind::config, "--set expects key=value, got '" + kv + "'");
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (cmd->count("--seed")) cfg.seed = c.seed;
  if (cmd->count("--runs")) cfg.runs = c.runs;
  if (cmd->count("--out")) cfg.out_dir = c.out;
  return cfg;
}

void report(const ExperimentTable& table, const std::string& dir) {
  for (const auto& f : table.failures) std::cerr << "warning: " << f << '\n';
  write_summary(std::cout, table);
  std::cout << "\nwrote " << dir << "/metrics.csv\n";
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::config, "values: '" + item + "' is not a number");
    }
  }
  if (out.empty()) fail(ErrorKind::config, "values: empty list");
  return out;
}

void print_placement(const PopularityProfile& p, int L, const AspConstants& k) {
  const CachePolicy policy = optimal_placement(p, L, k);
  auto print_set = [](const char* name, const std::vector<int>& idx) {
    std::printf("  %s = {", name);
    for (std::size_t i = 0; i < idx.size(); ++i) std::printf("%s%d", i ? ", " : "", idx[i] + 1);
    std::printf("}\n");
  };
  std::printf("q =");
  for (Eigen::Index i = 0; i < policy.q.size(); ++i) std::printf(" %.9g", policy.q[i]);
  std::printf("\nASP = %.9g\n", asp(p, policy.q, k));
  print_set("R", policy.partition.R);
  print_set("P", policy.partition.P);
  print_set("Z", policy.partition.Z);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Popularity prediction and probabilistic edge caching experiments"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "Run one experiment");
  add_common(run, run_opts);

  Common sweep_opts;
  std::string axis, values;
  auto* sweep = app.add_subcommand("sweep", "Repeat an experiment over one parameter");
  add_common(sweep, sweep_opts);
  sweep->add_option("--axis", axis, "tau, n or s")->required()->check(CLI::IsMember({"tau", "n", "s"}));
  sweep->add_option("--values", values, "Comma-separated axis values")->required();

  Common ml_opts;
  std::string ratings;
  double slot_days = 30.0;
  int id_lo = 1, id_hi = 100;
  auto* ml = app.add_subcommand("movielens", "Evaluate the models on a ratings file");
  add_common(ml, ml_opts);
  ml->add_option("--ratings", ratings, "user, item, rating, timestamp records")->required();
  ml->add_option("--slot-days", slot_days, "Slot length in days");
  ml->add_option("--id-lo", id_lo, "Lowest item id kept");
  ml->add_option("--id-hi", id_hi, "Highest item id kept");

  std::string profile_path, config_for_placement;
  int cache = 0;
  auto* place = app.add_subcommand("placement", "Print the optimal caching probabilities");
  place->add_option("--profile", profile_path, "CSV, one profile per line")->required();
  place->add_option("--L", cache, "Cache size")->required();
  place->add_option("--config", config_for_placement, "Config file for network parameters");

  Common stream_opts;
  std::string stream_file;
  auto* stream = app.add_subcommand("stream", "Export one replication's popularity stream as CSV");
  add_common(stream, stream_opts);
  stream->add_option("--file", stream_file, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      const ExperimentConfig cfg = resolve(run_opts, run);
      const ExperimentTable table = run_experiment(cfg);
      emit_outputs(table, cfg.out_dir);
      report(table, cfg.out_dir);
    } else if (*sweep) {
      const ExperimentConfig cfg = resolve(sweep_opts, sweep);
      const auto points = run_sweep(cfg, axis, parse_values(values));
      emit_sweep_outputs(axis, points, cfg.out_dir);
      write_sweep_csv(std::cout, axis, points);
    } else if (*ml) {
      ExperimentConfig cfg = resolve(ml_opts, ml);
      cfg.scenario = Scenario::movielens;
      cfg.ratings = ratings;
      if (ml->count("--slot-days")) cfg.slot_days = slot_days;
      if (ml->count("--id-lo")) cfg.id_lo = id_lo;
      if (ml->count("--id-hi")) cfg.id_hi = id_hi;
      cfg.n_files = cfg.id_hi - cfg.id_lo + 1;
      const ExperimentTable table = run_experiment(cfg);
      emit_outputs(table, cfg.out_dir);
      report(table, cfg.out_dir);
    } else if (*place) {
      ExperimentConfig cfg;
      if (!config_for_placement.empty()) cfg = load_config(config_for_placement);
      std::ifstream in(profile_path);
      if (!in) fail(ErrorKind::data, "cannot open profile file '" + profile_path + "'");
      const auto profiles = read_profiles_csv(in);
      const AspConstants k = compute_constants(cfg.network);
      for (const auto& p : profiles) {
        if (cache < 1 || cache > p.size()) fail(ErrorKind::config, "L: must lie in [1, N]");
        print_placement(p, cache, k);
      }
    } else if (*stream) {
      const ExperimentConfig cfg = resolve(stream_opts, stream);
      cfg.validate();
      const ZipfSpec zipf{cfg.n_files, cfg.zipf_s};
      std::vector<PopularityProfile> profiles;
      if (cfg.scenario == Scenario::quasi)
        profiles = generate_quasi_stream(cfg.order, cfg.block_len, cfg.n_blocks, zipf, cfg.seed).profiles;
      else if (cfg.scenario == Scenario::time_varying)
        profiles = generate_iid_stream(zipf, cfg.window + cfg.slots, cfg.seed, cfg.stream);
      else
        fail(ErrorKind::config, "scenario: stream export supports time-varying and quasi");
      std::ofstream out(stream_file);
      if (!out) fail(ErrorKind::data, "cannot write '" + stream_file + "'");
      write_stream_csv(out, profiles);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
