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

// Serial vs OpenMP timing for the replication loop and batch placement.
// Usage: bench_replications [runs] [threads]

#include <chrono>
#include <cstdio>
#include <cstdlib>

#include <omp.h>

#include "edgecache/data.hpp"
#include "edgecache/harness.hpp"
#include "edgecache/ppp_asp.hpp"

using namespace edgecache;

namespace {

template <typename F>
double seconds(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool same(const ExperimentTable& a, const ExperimentTable& b) {
  if (a.models != b.models || a.slots != b.slots) return false;
  for (std::size_t m = 0; m < a.models.size(); ++m)
    for (std::size_t j = 0; j < 3; ++j)
      for (int s = 0; s < a.slots; ++s) {
        const auto& x = a.per_slot[m][j][static_cast<std::size_t>(s)];
        const auto& y = b.per_slot[m][j][static_cast<std::size_t>(s)];
        if (x.mean != y.mean || x.stderr_ != y.stderr_) return false;
      }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  ExperimentConfig cfg;
  cfg.runs = argc > 1 ? std::atoi(argv[1]) : 100;
  cfg.threads = argc > 2 ? std::atoi(argv[2]) : 0;
  const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();

  ExperimentTable serial, parallel;
  const double ts = seconds([&] { serial = run_experiment_serial(cfg); });
  const double tp = seconds([&] { parallel = run_experiment(cfg); });
  std::printf("replications=%d threads=%d\n", cfg.runs, threads);
  std::printf("experiment  serial %.3f s  parallel %.3f s  speedup %.2fx  identical=%s\n", ts, tp, ts / tp,
              same(serial, parallel) ? "yes" : "NO");

  const AspConstants k = compute_constants(cfg.network);
  const auto profiles = generate_iid_stream({20, 0.8}, 200000, 11);
  std::vector<CachePolicy> a, b;
  const double bs = seconds([&] { a = optimal_placement_batch_serial(profiles, 5, k); });
  const double bp = seconds([&] { b = optimal_placement_batch(profiles, 5, k); });
  bool equal = a.size() == b.size();
  for (std::size_t i = 0; equal && i < a.size(); ++i) equal = a[i].q == b[i].q;
  std::printf("placement   serial %.3f s  parallel %.3f s  speedup %.2fx  identical=%s  (%zu profiles, N=20)\n",
              bs, bp, bs / bp, equal ? "yes" : "NO", profiles.size());
  return same(serial, parallel) && equal ? 0 : 1;
}
