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

// Acceptance checks: one PASS/FAIL line per criterion.
//
// usage: acceptance [--known-red i,j,...] [--only i,j,...]
//
// Known-red criteria still print FAIL with their data; they only stop a
// failure from turning the exit status nonzero.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "edgecache/data.hpp"
#include "edgecache/harness.hpp"
#include "edgecache/kwik.hpp"
#include "edgecache/nnls.hpp"
#include "edgecache/ppp_asp.hpp"
#include "enumeration_oracle.hpp"
#include "regret_streams.hpp"
#include "test_support.hpp"

using namespace edgecache;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const AspConstants& defaults() {
  static const AspConstants k = compute_constants(NetworkParams{});
  return k;
}

Verdict placement_oracle() {
  const auto start = Clock::now();
  Rng rng(101);
  double worst_q = 0.0, worst_asp = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 7;
    const int budget = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    const PopularityProfile p(testing::random_profile_values(rng, n));
    const auto closed = optimal_placement(p, budget, defaults());
    const auto oracle = oracle_placement(p, budget, defaults());
    worst_q = std::max(worst_q, (closed.q - oracle.q).cwiseAbs().maxCoeff());
    worst_asp = std::max(worst_asp, std::abs(asp(p, closed.q, defaults()) - asp(p, oracle.q, defaults())));
  }
  const double elapsed = seconds_since(start);
  return {worst_q <= 1e-4 && worst_asp <= 1e-6 && elapsed < 10.0,
          fmt("max |dq| %.2e, max |dASP| %.2e, %.2f s", worst_q, worst_asp, elapsed)};
}

Verdict symmetry() {
  double worst = 0.0;
  for (int n = 2; n <= 10; ++n)
    for (int budget = 1; budget < n; ++budget) {
      const auto policy = optimal_placement(PopularityProfile::uniform(n), budget, defaults());
      worst = std::max(worst, (policy.q.array() - double(budget) / n).abs().maxCoeff());
    }
  return {worst <= 1e-9, fmt("max |q - L/N| %.2e", worst)};
}

Verdict constants_check() {
  Rng rng(303);
  std::uniform_real_distribution<double> alpha(2.2, 6.0), density(1.0, 1000.0), rate(0.05, 4.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    NetworkParams net;
    net.path_loss = alpha(rng);
    net.bs_density = density(rng);
    net.rate_threshold = rate(rng) * net.bandwidth;
    const auto k = compute_constants(net);
    const double a = net.path_loss, s0 = net.sinr_threshold();
    const double reference = 2.0 * std::numbers::pi * net.bs_density * std::pow(s0, 2.0 / a) *
                             (std::numbers::pi / a) / std::sin(2.0 * std::numbers::pi / a);
    worst = std::max(worst, std::abs(k.B - reference) / reference);
  }
  return {worst <= 1e-8, fmt("max relative error %.2e", worst)};
}

Verdict nnls_optimality() {
  const auto start = Clock::now();
  Rng rng(404);
  std::normal_distribution<double> normal;
  double worst_gap = 0.0, worst_kkt = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    Matrix H(6, 4);
    Vector y(6);
    for (Eigen::Index i = 0; i < H.size(); ++i) H.data()[i] = normal(rng);
    for (auto& v : y) v = normal(rng);
    const auto sol = solve_simplex_nnls({H, y, Constraint::simplex});
    const Matrix G = H.transpose() * H;
    const Vector b = H.transpose() * y;
    const auto oracle = testing::enumerate_simplex_qp(G, b);
    worst_gap = std::max(worst_gap, std::abs(quadratic_objective(G, b, sol.x) - oracle.objective));
    worst_kkt = std::max(worst_kkt, testing::simplex_kkt_residual(G, b, sol.x));
  }
  const double elapsed = seconds_since(start);
  return {worst_gap <= 1e-8 && worst_kkt <= 1e-6 && elapsed < 5.0,
          fmt("max objective gap %.2e, max KKT residual %.2e, %.2f s", worst_gap, worst_kkt, elapsed)};
}

Verdict regret() {
  int violations = 0, streams = 0;
  double ppm = -INFINITY, gpm = -INFINITY, rpm = -INFINITY, ipm = -INFINITY;
  auto record = [&](const testing::RegretCheck& c) {
    ++streams;
    violations += !c.ok();
    ppm = std::max(ppm, c.ppm.regret / c.ppm.bound);
    gpm = std::max(gpm, c.gpm.regret / c.gpm.bound);
    rpm = std::max(rpm, c.rpm.regret / c.rpm.bound);
    ipm = std::max(ipm, c.ipm.regret / c.ipm.bound);
  };
  for (std::uint64_t seed = 1; seed <= 50; ++seed) record(testing::check_regret(testing::random_stream(seed, 3, 1.5, 1000)));
  for (int variant = 0; variant < 5; ++variant)
    record(testing::check_regret(testing::adversarial_stream(variant, 3, 1.5, 1000)));
  return {violations == 0, fmt("%d streams, %d violations; worst regret/bound ppm %.3f gpm %.3f rpm %.3f ipm %.3f",
                               streams, violations, ppm, gpm, rpm, ipm)};
}

Verdict ppm_running_mean() {
  Rng rng(606);
  PpmLearner learner(6);
  Vector sum = Vector::Zero(6);
  double worst = 0.0;
  for (int t = 1; t <= 10000; ++t) {
    const PopularityProfile p(testing::random_profile_values(rng, 6));
    sum += p.values();
    learner.observe(p);
    worst = std::max(worst, (learner.prediction().values() - sum / t).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-12, fmt("max deviation %.2e over 1e4 steps", worst)};
}

Verdict kwik_recovery() {
  const int d = 4, block = 200, blocks = 3;
  double worst_mse = 0.0;
  bool monotone = true;
  std::string windows;
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    const auto stream = generate_quasi_stream(d, block, blocks, {3, 1.5}, seed);
    KwikPredictor kwik(ModelKind::ppm, 3, KwikConfig{});
    std::vector<int> abstained(stream.profiles.size(), 0);
    for (std::size_t t = 0; t < stream.profiles.size(); ++t) {
      const auto out = kwik.step(stream.profiles[t]);
      abstained[t] = out ? 0 : 1;
      const std::size_t next = t + 1;
      if (out && next < stream.profiles.size() && next % block >= 50)
        worst_mse = std::max(worst_mse, mse(stream.profiles[next], out->values()));
    }
    for (int b = 0; b < blocks; ++b) {
      int prev = block;
      for (int w = 0; w < block / 100; ++w) {
        int count = 0;
        for (int t = b * block + 100 * w; t < b * block + 100 * (w + 1); ++t) count += abstained[static_cast<std::size_t>(t)];
        if (seed == 1) windows += (windows.empty() ? "" : " ") + std::to_string(count);
        if (count > prev) monotone = false;
        prev = count;
      }
    }
  }
  return {worst_mse <= 1e-6 && monotone,
          fmt("max within-block MSE %.2e; abstentions per 100 slots (seed 1) %s", worst_mse, windows.c_str())};
}

Verdict quasi_ordering() {
  ExperimentConfig cfg;
  cfg.scenario = Scenario::quasi;
  cfg.models = {"kwik-ppm", "ol-ppm"};
  cfg.runs = 100;
  const auto table = run_experiment(cfg);
  const double kwik = table.mean("kwik-ppm", "mse"), ol = table.mean("ol-ppm", "mse");
  return {table.failures.empty() && kwik <= 0.8 * ol,
          fmt("KWIK-PPM %.3e vs OL-PPM %.3e (ratio %.3f), %zu failed replications", kwik, ol, kwik / ol,
              table.failures.size())};
}

Verdict time_varying_ordering() {
  ExperimentConfig cfg;
  cfg.models = {"op-ppm", "op-gpm", "op-rpm"};
  cfg.runs = 100;
  const auto table = run_experiment(cfg);
  const double ppm = table.mean("op-ppm", "mse"), gpm = table.mean("op-gpm", "mse"),
               rpm = table.mean("op-rpm", "mse");
  return {table.failures.empty() && ppm <= rpm && gpm <= rpm,
          fmt("OP-PPM %.4f, OP-GPM %.4f, OP-RPM %.4f", ppm, gpm, rpm)};
}

Verdict trends() {
  ExperimentConfig cfg;
  cfg.models = {"op-ppm", "op-gpm", "op-rpm", "op-ipm", "op-asppm"};
  cfg.runs = 100;
  std::string detail, offenders;
  bool ok = true;

  const auto tau = run_sweep(cfg, "tau", {6, 10, 20});
  for (const auto& model : cfg.models) {
    detail += model + " tau";
    for (std::size_t i = 0; i < tau.size(); ++i) {
      const double v = tau[i].table.mean(model, "mse");
      detail += fmt(" %.4f", v);
      if (i > 0 && v > tau[i - 1].table.mean(model, "mse")) {
        ok = false;
        offenders += " " + model + "(tau)";
      }
    }
    detail += "; ";
  }

  ExperimentConfig wide = cfg;
  wide.n_files = 10;
  const auto s = run_sweep(wide, "s", {0.4, 0.7, 1.0, 1.3});
  for (const auto& model : cfg.models) {
    detail += model + " s";
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double v = s[i].table.mean(model, "mse");
      detail += fmt(" %.4f", v);
      if (i > 0 && v > 1.05 * s[i - 1].table.mean(model, "mse")) {
        ok = false;
        offenders += " " + model + "(s)";
      }
    }
    detail += "; ";
  }
  for (const auto& point : tau) ok = ok && point.table.failures.empty();
  for (const auto& point : s) ok = ok && point.table.failures.empty();
  return {ok, detail + (offenders.empty() ? "" : "violations:" + offenders)};
}

Verdict determinism() {
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "edgecache_acceptance";
  fs::remove_all(root);
  const std::string cli = EDGECACHE_CLI;
  std::string files[2];
  for (int i = 0; i < 2; ++i) {
    const fs::path out = root / ("run" + std::to_string(i));
    const std::string cmd = "\"" + cli + "\" run --seed 2024 --runs 20 --out \"" + out.string() + "\" > \"" +
                            (root / "log.txt").string() + "\" 2>&1";
    fs::create_directories(root);
    if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + testing::slurp((root / "log.txt").string())};
    files[i] = testing::slurp((out / "metrics.csv").string());
  }
  fs::remove_all(root);
  return {!files[0].empty() && files[0] == files[1], fmt("metrics.csv %zu bytes, identical: %s", files[0].size(),
                                                         files[0] == files[1] ? "yes" : "no")};
}

Verdict workload() {
  const SynthConfig cfg;
  double worst = 0.0;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto m = generate_requests(cfg, seed);
    const Vector totals = m.counts.cast<double>().rowwise().sum();
    worst = std::max(worst, total_variation(totals / totals.sum(), zipf_pmf(cfg.zipf).values()));
  }
  return {worst <= 0.02, fmt("max TV distance %.2e over 3 seeds", worst)};
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.insert(std::stoi(item));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known_red, only;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--known-red")
      known_red = parse_list(argv[i + 1]);
    else if (flag == "--only")
      only = parse_list(argv[i + 1]);
  }

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"placement matches the projected-gradient oracle", placement_oracle},
      {"uniform popularity gives q = L/N", symmetry},
      {"quadrature B matches the Beta closed form", constants_check},
      {"simplex NNLS matches exhaustive enumeration", nnls_optimality},
      {"online-learning regret within bounds", regret},
      {"PPM online estimate is the running mean", ppm_running_mean},
      {"KWIK recovers the quasi-stream model", kwik_recovery},
      {"KWIK-PPM beats OL-PPM by 20% on quasi data", quasi_ordering},
      {"OP-PPM and OP-GPM beat OP-RPM on time-varying data", time_varying_ordering},
      {"MSE trends in tau and s", trends},
      {"identical seeds give identical metrics.csv", determinism},
      {"request shares within 0.02 TV of the Zipf pmf", workload},
  };

  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("error: ") + e.what()};
    }
    const bool red = known_red.count(id) > 0;
    std::printf("criterion %2d %s: %s%s | %s\n", id, criteria[i].first.c_str(), v.pass ? "PASS" : "FAIL",
                !v.pass && red ? " (known red)" : "", v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass && !red) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
