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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "edgecache/core.hpp"

namespace edgecache {

/// Poisson request workload: exponential inter-arrivals, Poisson batch sizes,
/// Zipf-distributed file choice.
struct SynthConfig {
  double mean_requests = 100.0;  // requests per arrival
  double inter_arrival = 0.01;   // seconds
  double slot_duration = 900.0;  // seconds
  long n_events = 200000;
  ZipfSpec zipf;

  void validate() const;
};

/// Categorical sampling by inverse CDF over a cumulative table.
class InverseCdfSampler {
 public:
  explicit InverseCdfSampler(const PopularityProfile& pmf);
  int operator()(Rng& rng) const;

 private:
  std::vector<double> cdf_;
};

/// Every event lands in slot ceil(t / T); slots are columns.
RequestMatrix generate_requests(const SynthConfig& cfg, std::uint64_t seed);

struct StreamOptions {
  bool permute = true;          // shuffle the Zipf ranks every slot
  double concentration = 100.0; // Dirichlet jitter around the pmf; 0 disables
};

/// Independent profile per slot built from the Zipf pmf.
std::vector<PopularityProfile> generate_iid_stream(const ZipfSpec& zipf, int n_slots,
                                                   std::uint64_t seed, StreamOptions opts = {});

/// Block-wise convex autoregression. The first `order` slots are seed
/// profiles; every later slot of block b is sum_k c_b[k] p_{t-k} with c_b
/// drawn from a flat Dirichlet. Total length block_len * n_blocks.
struct QuasiStream {
  std::vector<PopularityProfile> profiles;
  std::vector<Vector> coefficients;  // per block; entry k-1 multiplies p_{t-k}
};
QuasiStream generate_quasi_stream(int order, int block_len, int n_blocks, const ZipfSpec& zipf,
                                  std::uint64_t seed, StreamOptions opts = {});

/// Slot traffic for a given profile: arrivals per file K_l ~ Poisson(E p_l)
/// with E = T / dt, requests n_l ~ Poisson(lambda_req K_l).
struct SlotTraffic {
  double mean_requests = 100.0;
  double inter_arrival = 0.01;
  double slot_duration = 900.0;
};
Vector sample_slot_counts(const PopularityProfile& p, const SlotTraffic& traffic, Rng& rng);

/// Header `slot,file_1..file_N`, probabilities with nine decimals.
void write_stream_csv(std::ostream& out, const std::vector<PopularityProfile>& profiles);

/// Reads one profile per line, comma separated; used by the placement tool.
/// A `slot,...` header, as written by write_stream_csv, drops the first column.
std::vector<PopularityProfile> read_profiles_csv(std::istream& in);

struct MovieLensOptions {
  double slot_seconds = 30.0 * 86400.0;
  int id_lo = 1;
  int id_hi = 100;
};

struct MovieLensData {
  std::vector<PopularityProfile> profiles;
  Matrix rating_sums;                // files x retained slots
  std::vector<std::int64_t> slots;   // bucket index of each retained slot
  std::vector<std::int64_t> gaps;    // empty buckets that were dropped
  long rows_used = 0;
};

/// Ratings file with (user, item, rating, timestamp) records, tab or comma
/// separated. A non-numeric first line is taken as a header.
MovieLensData load_movielens(const std::string& path, const MovieLensOptions& opts = {});
MovieLensData parse_movielens(std::istream& in, const MovieLensOptions& opts = {});

}  // namespace edgecache
