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

#include "edgecache/harness.hpp"

#include <cmath>
#include <exception>
#include <optional>

#include <omp.h>

#include "edgecache/ol_predictors.hpp"

namespace edgecache {
namespace {

struct Stream {
  std::vector<PopularityProfile> profiles;
  std::vector<Vector> counts;
};

// Per-replication metric traces: [model][metric][slot].
struct Replication {
  bool ok = false;
  std::string error;
  std::vector<std::array<std::vector<double>, 3>> values;
};

Stream synthetic_stream(const ExperimentConfig& cfg, int rep) {
  const ZipfSpec zipf{cfg.n_files, cfg.zipf_s};
  const auto r = static_cast<std::uint64_t>(rep);
  Stream s;
  switch (cfg.scenario) {
    case Scenario::time_varying:
      s.profiles = generate_iid_stream(zipf, cfg.window + cfg.slots, split_seed(cfg.seed, 2 * r), cfg.stream);
      break;
    case Scenario::constant:
      s.profiles.assign(static_cast<std::size_t>(cfg.window + cfg.slots), zipf_pmf(zipf));
      break;
    case Scenario::quasi: {
      // Seed profiles are independent permuted draws so blocks start from distinct shapes.
      const StreamOptions seeds{true, cfg.stream.concentration};
      s.profiles = generate_quasi_stream(cfg.order, cfg.block_len, cfg.n_blocks, zipf,
                                         split_seed(cfg.seed, 2 * r), seeds)
                       .profiles;
      break;
    }
    case Scenario::movielens:
      fail(ErrorKind::invalid_argument, "movielens stream is loaded, not generated");
  }
  Rng rng(split_seed(cfg.seed, 2 * r + 1));
  for (const auto& p : s.profiles) s.counts.push_back(sample_slot_counts(p, cfg.traffic, rng));
  return s;
}

Stream movielens_stream(const ExperimentConfig& cfg) {
  MovieLensOptions opts;
  opts.slot_seconds = cfg.slot_days * 86400.0;
  opts.id_lo = cfg.id_lo;
  opts.id_hi = cfg.id_hi;
  const MovieLensData data = load_movielens(cfg.ratings, opts);
  Stream s;
  s.profiles = data.profiles;
  for (Eigen::Index j = 0; j < data.rating_sums.cols(); ++j) s.counts.push_back(data.rating_sums.col(j).array().round());
  if (static_cast<int>(s.profiles.size()) <= cfg.window)
    fail(ErrorKind::data, "dataset has " + std::to_string(s.profiles.size()) + " slots, window needs more");
  return s;
}

// Online state of one OL or KWIK model.
struct Learner {
  ModelSpec spec;
  std::optional<PpmLearner> ppm;
  std::optional<GpmLearner> gpm;
  std::optional<RpmLearner> rpm;
  std::optional<IpmLearner> ipm;
  std::optional<KwikPredictor> kwik;
  std::optional<PopularityProfile> forecast;  // KWIK output for the next slot
};

Learner make_learner(const ModelSpec& spec, const ExperimentConfig& cfg, const AspConstants& k) {
  Learner l{spec, {}, {}, {}, {}, {}, {}};
  const auto n = static_cast<Eigen::Index>(cfg.n_files);
  if (spec.family == Family::kwik) {
    KwikConfig kc = cfg.kwik;
    kc.order = cfg.order;
    l.kwik.emplace(spec.kind, n, kc, &k, cfg.network.cache_size, cfg.prob_floor);
    return l;
  }
  switch (spec.kind) {
    case ModelKind::ppm:
    case ModelKind::asppm: l.ppm.emplace(n); break;
    case ModelKind::gpm: l.gpm.emplace(n); break;
    case ModelKind::rpm: l.rpm.emplace(n); break;
    case ModelKind::ipm: l.ipm.emplace(n, cfg.prob_floor); break;
  }
  return l;
}

PopularityProfile learner_prediction(const Learner& l, const PpmLearner& fallback) {
  if (l.kwik) return l.forecast ? *l.forecast : fallback.prediction();
  if (l.ppm) return l.ppm->prediction();
  if (l.gpm) return l.gpm->prediction();
  if (l.rpm) return l.rpm->prediction();
  return l.ipm->prediction();
}

void learner_observe(Learner& l, const PopularityProfile& p, const Vector& counts) {
  if (l.kwik) l.forecast = l.kwik->step(p, &counts);
  else if (l.ppm) l.ppm->observe(p);
  else if (l.gpm) l.gpm->observe(p.sqrt());
  else if (l.rpm) l.rpm->observe(counts);
  else l.ipm->observe(p);
}

Replication replicate(const ExperimentConfig& cfg, const std::vector<ModelSpec>& specs,
                      const AspConstants& k, const Stream& stream) {
  const int L = cfg.network.cache_size;
  const int first = cfg.window;
  const int total = static_cast<int>(stream.profiles.size());
  const auto n = static_cast<Eigen::Index>(cfg.n_files);

  OpConfig op;
  op.order = cfg.order;
  op.window = cfg.window;
  op.prob_floor = cfg.prob_floor;

  Replication rep;
  rep.values.resize(specs.size());
  for (auto& m : rep.values)
    for (auto& v : m) v.reserve(static_cast<std::size_t>(total - first));

  std::vector<std::optional<Learner>> learners(specs.size());
  for (std::size_t m = 0; m < specs.size(); ++m)
    if (specs[m].family != Family::op) learners[m] = make_learner(specs[m], cfg, k);
  PpmLearner fallback(n);

  for (int t = 0; t < total; ++t) {
    const PopularityProfile& truth = stream.profiles[static_cast<std::size_t>(t)];
    if (t >= first) {
      const CachePolicy best = optimal_placement(truth, L, k);
      const double best_asp = asp(truth, best.q, k);
      HistoryWindow window;
      window.t = t;
      window.profiles.assign(stream.profiles.begin() + (t - first), stream.profiles.begin() + t);
      CountMatrix counts(n, cfg.window);
      for (int i = 0; i < cfg.window; ++i)
        counts.col(i) = stream.counts[static_cast<std::size_t>(t - first + i)].array().round().cast<std::int64_t>();
      window.counts = counts;

      for (std::size_t m = 0; m < specs.size(); ++m) {
        PopularityProfile guess = PopularityProfile::uniform(n);
        if (specs[m].family == Family::op) {
          op.kind = specs[m].kind;
          guess = op_predict(window, op, k, L);
        } else {
          guess = learner_prediction(*learners[m], fallback);
        }
        const CachePolicy placed = optimal_placement(guess, L, k);
        const double values[3] = {mse(truth, guess.values()), best_asp - asp(guess, placed.q, k),
                                  best_asp - asp(truth, placed.q, k)};
        for (int j = 0; j < 3; ++j) {
          if (!std::isfinite(values[j])) fail(ErrorKind::numerical, "non-finite metric for " + specs[m].label);
          rep.values[m][static_cast<std::size_t>(j)].push_back(values[j]);
        }
      }
    }
    const Vector& c = stream.counts[static_cast<std::size_t>(t)];
    fallback.observe(truth);
    for (auto& l : learners)
      if (l) learner_observe(*l, truth, c);
  }
  rep.ok = true;
  return rep;
}

Stat summarize(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.stderr_ = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return s;
}

ExperimentTable reduce(const ExperimentConfig& cfg, const std::vector<ModelSpec>& specs,
                       const std::vector<Replication>& reps, int slots) {
  ExperimentTable table;
  table.scenario = to_string(cfg.scenario);
  for (const auto& s : specs) table.models.push_back(s.label);
  table.slots = slots;
  std::vector<const Replication*> good;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    if (reps[r].ok)
      good.push_back(&reps[r]);
    else
      table.failures.push_back("replication " + std::to_string(r) + ": " + reps[r].error);
  }
  table.replications = static_cast<int>(good.size());
  if (good.empty()) fail(ErrorKind::numerical, "every replication failed; first: " + reps.front().error);

  table.per_slot.resize(specs.size());
  table.overall.resize(specs.size());
  std::vector<double> column(good.size());
  for (std::size_t m = 0; m < specs.size(); ++m) {
    for (std::size_t j = 0; j < 3; ++j) {
      auto& series = table.per_slot[m][j];
      series.resize(static_cast<std::size_t>(slots));
      for (int s = 0; s < slots; ++s) {
        for (std::size_t r = 0; r < good.size(); ++r) column[r] = good[r]->values[m][j][static_cast<std::size_t>(s)];
        series[static_cast<std::size_t>(s)] = summarize(column);
      }
      for (std::size_t r = 0; r < good.size(); ++r) {
        double sum = 0.0;
        for (double x : good[r]->values[m][j]) sum += x;
        column[r] = sum / slots;
      }
      table.overall[m][j] = summarize(column);
    }
  }
  return table;
}

ExperimentTable run(const ExperimentConfig& cfg, bool parallel) {
  cfg.validate();
  std::vector<ModelSpec> specs;
  for (const auto& label : cfg.models) specs.push_back(parse_model(label));
  const AspConstants k = compute_constants(cfg.network);

  std::optional<Stream> shared;
  int runs = cfg.runs;
  if (cfg.scenario == Scenario::movielens) {
    shared = movielens_stream(cfg);
    runs = 1;  // the data set is fixed; replications would be identical
    if (shared->profiles.front().size() != cfg.n_files)
      fail(ErrorKind::config, "n_files: must equal id_hi - id_lo + 1 for the movielens scenario");
  }
  const int slots = shared ? static_cast<int>(shared->profiles.size()) - cfg.window
                   : cfg.scenario == Scenario::quasi ? cfg.block_len * cfg.n_blocks - cfg.window
                                                     : cfg.slots;

  std::vector<Replication> reps(static_cast<std::size_t>(runs));
  auto one = [&](int r) {
    auto& out = reps[static_cast<std::size_t>(r)];
    try {
      out = replicate(cfg, specs, k, shared ? *shared : synthetic_stream(cfg, r));
    } catch (const std::exception& e) {
      out = Replication{};
      out.error = e.what();
    }
  };
  if (parallel) {
    const int threads = cfg.threads > 0 ? cfg.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (int r = 0; r < runs; ++r) one(r);
  } else {
    for (int r = 0; r < runs; ++r) one(r);
  }
  return reduce(cfg, specs, reps, slots);
}

}  // namespace

ModelSpec parse_model(const std::string& label) {
  const auto dash = label.find('-');
  if (dash == std::string::npos) fail(ErrorKind::config, "models: bad label '" + label + "'");
  const std::string family = label.substr(0, dash);
  ModelSpec spec;
  spec.label = label;
  if (family == "op")
    spec.family = Family::op;
  else if (family == "ol")
    spec.family = Family::ol;
  else if (family == "kwik")
    spec.family = Family::kwik;
  else
    fail(ErrorKind::config, "models: unknown family in '" + label + "'");
  try {
    spec.kind = parse_model_kind(label.substr(dash + 1));
  } catch (const Error&) {
    fail(ErrorKind::config, "models: unknown model in '" + label + "'");
  }
  return spec;
}

double ExperimentTable::mean(const std::string& model, const std::string& metric) const {
  for (std::size_t m = 0; m < models.size(); ++m) {
    if (models[m] != model) continue;
    for (std::size_t j = 0; j < kMetricNames.size(); ++j)
      if (metric == kMetricNames[j]) return overall[m][j].mean;
  }
  fail(ErrorKind::invalid_argument, "no such model/metric: " + model + "/" + metric);
}

ExperimentTable run_experiment(const ExperimentConfig& cfg) { return run(cfg, true); }

ExperimentTable run_experiment_serial(const ExperimentConfig& cfg) { return run(cfg, false); }

ExperimentConfig apply_axis(ExperimentConfig cfg, const std::string& axis, double value) {
  auto as_int = [&](const char* field) {
    if (value != std::floor(value)) fail(ErrorKind::config, std::string(field) + ": sweep value must be an integer");
    return static_cast<int>(value);
  };
  if (axis == "tau")
    cfg.window = as_int("window");
  else if (axis == "n")
    cfg.n_files = as_int("n_files");
  else if (axis == "s")
    cfg.zipf_s = value;
  else
    fail(ErrorKind::config, "axis: expected tau, n or s, got '" + axis + "'");
  return cfg;
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, const std::string& axis,
                                  const std::vector<double>& values) {
  if (values.empty()) fail(ErrorKind::config, "values: empty sweep");
  std::vector<SweepPoint> out;
  for (double v : values) out.push_back({v, run_experiment(apply_axis(cfg, axis, v))});
  return out;
}

}  // namespace edgecache
