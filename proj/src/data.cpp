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

#include "edgecache/data.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace edgecache {
namespace {

PopularityProfile dirichlet(const Vector& alpha, Rng& rng) {
  Vector draw(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    std::gamma_distribution<double> gamma(alpha[i], 1.0);
    draw[i] = gamma(rng);
  }
  if (!(draw.sum() > 0.0)) return PopularityProfile::normalized(alpha);
  return PopularityProfile::normalized(draw);
}

PopularityProfile draw_slot(const PopularityProfile& pmf, const StreamOptions& opts, Rng& rng) {
  Vector v = pmf.values();
  if (opts.permute) std::shuffle(v.begin(), v.end(), rng);
  if (opts.concentration > 0.0) return dirichlet(opts.concentration * v, rng);
  return PopularityProfile(v);
}

}  // namespace

void SynthConfig::validate() const {
  if (!(mean_requests > 0.0)) fail(ErrorKind::config, "mean_requests: must be > 0");
  if (!(inter_arrival > 0.0)) fail(ErrorKind::config, "inter_arrival: must be > 0");
  if (!(slot_duration > 0.0)) fail(ErrorKind::config, "slot_duration: must be > 0");
  if (n_events < 1) fail(ErrorKind::config, "n_events: must be >= 1");
  if (zipf.n_files < 1) fail(ErrorKind::config, "n_files: must be >= 1");
}

InverseCdfSampler::InverseCdfSampler(const PopularityProfile& pmf) {
  cdf_.resize(static_cast<std::size_t>(pmf.size()));
  std::partial_sum(pmf.values().begin(), pmf.values().end(), cdf_.begin());
  cdf_.back() = 1.0;
}

int InverseCdfSampler::operator()(Rng& rng) const {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cdf_.begin(), static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
}

RequestMatrix generate_requests(const SynthConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  std::exponential_distribution<double> gap(1.0 / cfg.inter_arrival);
  std::poisson_distribution<long> batch(cfg.mean_requests);
  const InverseCdfSampler pick(zipf_pmf(cfg.zipf));

  std::vector<std::vector<std::int64_t>> columns;
  double clock = 0.0;
  for (long i = 0; i < cfg.n_events; ++i) {
    clock += gap(rng);
    const long size = batch(rng);
    const int file = pick(rng);
    const auto slot = static_cast<std::size_t>(std::max(1.0, std::ceil(clock / cfg.slot_duration))) - 1;
    if (slot >= columns.size())
      columns.resize(slot + 1, std::vector<std::int64_t>(static_cast<std::size_t>(cfg.zipf.n_files), 0));
    columns[slot][static_cast<std::size_t>(file)] += size;
  }

  RequestMatrix out;
  out.slot_duration = cfg.slot_duration;
  out.counts = CountMatrix::Zero(cfg.zipf.n_files, static_cast<Eigen::Index>(columns.size()));
  for (std::size_t s = 0; s < columns.size(); ++s)
    for (std::size_t f = 0; f < columns[s].size(); ++f)
      out.counts(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(s)) = columns[s][f];
  return out;
}

std::vector<PopularityProfile> generate_iid_stream(const ZipfSpec& zipf, int n_slots,
                                                   std::uint64_t seed, StreamOptions opts) {
  if (n_slots < 1) fail(ErrorKind::invalid_argument, "stream needs at least one slot");
  Rng rng(seed);
  const PopularityProfile pmf = zipf_pmf(zipf);
  std::vector<PopularityProfile> out;
  out.reserve(static_cast<std::size_t>(n_slots));
  for (int t = 0; t < n_slots; ++t) out.push_back(draw_slot(pmf, opts, rng));
  return out;
}

QuasiStream generate_quasi_stream(int order, int block_len, int n_blocks, const ZipfSpec& zipf,
                                  std::uint64_t seed, StreamOptions opts) {
  if (order < 1) fail(ErrorKind::invalid_argument, "order must be >= 1");
  if (block_len <= order) fail(ErrorKind::invalid_argument, "block length must exceed the order");
  if (n_blocks < 1) fail(ErrorKind::invalid_argument, "need at least one block");

  QuasiStream out;
  out.profiles = generate_iid_stream(zipf, order, split_seed(seed, 0), opts);
  Rng rng(split_seed(seed, 1));
  const Vector flat = Vector::Ones(order);
  for (int b = 0; b < n_blocks; ++b) {
    const Vector c = dirichlet(flat, rng).values();
    out.coefficients.push_back(c);
    const int begin = std::max(b * block_len, order);
    for (int t = begin; t < (b + 1) * block_len; ++t) {
      Vector next = Vector::Zero(zipf.n_files);
      for (int k = 1; k <= order; ++k) next += c[k - 1] * out.profiles[static_cast<std::size_t>(t - k)].values();
      out.profiles.push_back(PopularityProfile::normalized(next));
    }
  }
  return out;
}

Vector sample_slot_counts(const PopularityProfile& p, const SlotTraffic& traffic, Rng& rng) {
  const double arrivals = traffic.slot_duration / traffic.inter_arrival;
  Vector counts(p.size());
  for (Eigen::Index l = 0; l < p.size(); ++l) {
    double k = 0.0;
    if (p[l] > 0.0) k = static_cast<double>(std::poisson_distribution<long>(arrivals * p[l])(rng));
    counts[l] = k > 0.0 ? static_cast<double>(std::poisson_distribution<long>(traffic.mean_requests * k)(rng)) : 0.0;
  }
  return counts;
}

void write_stream_csv(std::ostream& out, const std::vector<PopularityProfile>& profiles) {
  if (profiles.empty()) fail(ErrorKind::invalid_argument, "empty stream");
  const auto n = profiles.front().size();
  out << "slot";
  for (Eigen::Index l = 1; l <= n; ++l) out << ",file_" << l;
  out << '\n' << std::fixed << std::setprecision(9);
  for (std::size_t t = 0; t < profiles.size(); ++t) {
    out << t + 1;
    for (Eigen::Index l = 0; l < n; ++l) out << ',' << profiles[t][l];
    out << '\n';
  }
}

std::vector<PopularityProfile> read_profiles_csv(std::istream& in) {
  std::vector<PopularityProfile> out;
  std::string line;
  int lineno = 0;
  bool seen_header = false;
  bool slot_column = false;  // set by a `slot,...` header as written by write_stream_csv
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    std::vector<double> values;
    std::stringstream ss(line);
    std::string cell;
    try {
      if (slot_column) std::getline(ss, cell, ',');
      while (std::getline(ss, cell, ',')) {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      }
    } catch (const std::exception&) {
      if (out.empty() && !seen_header) {
        seen_header = true;
        slot_column = line.rfind("slot,", 0) == 0;
        continue;
      }
      fail(ErrorKind::data, "profile line " + std::to_string(lineno) + ": not a list of numbers");
    }
    const Vector v = Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
    // Nine-decimal files drift from unit sum by up to N * 5e-10.
    if (v.minCoeff() < 0.0 || std::abs(v.sum() - 1.0) > 1e-6)
      fail(ErrorKind::data, "profile line " + std::to_string(lineno) + ": not a probability vector");
    out.push_back(PopularityProfile::normalized(v));
  }
  if (out.empty()) fail(ErrorKind::data, "no profiles found");
  return out;
}

}  // namespace edgecache
