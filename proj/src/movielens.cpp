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

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <string_view>

#include "edgecache/data.hpp"

namespace edgecache {
namespace {

struct Rating {
  int item = 0;
  double rating = 0.0;
  std::int64_t timestamp = 0;
};

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool parse_rating(std::string_view line, Rating& r) {
  const char sep = line.find('\t') != std::string_view::npos ? '\t' : ',';
  const auto fields = split(line, sep);
  if (fields.size() != 4) return false;
  long user = 0;
  return parse_number(fields[0], user) && parse_number(fields[1], r.item) &&
         parse_number(fields[2], r.rating) && parse_number(fields[3], r.timestamp) &&
         std::isfinite(r.rating) && r.rating >= 0.0;
}

}  // namespace

MovieLensData parse_movielens(std::istream& in, const MovieLensOptions& opts) {
  if (!(opts.slot_seconds > 0.0)) fail(ErrorKind::config, "slot_days: must be > 0");
  if (opts.id_hi < opts.id_lo) fail(ErrorKind::config, "id range is empty");

  std::vector<Rating> kept;
  std::string line;
  long lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    Rating r;
    if (!parse_rating(line, r)) {
      if (first_content) {  // header row
        first_content = false;
        continue;
      }
      fail(ErrorKind::data, "ratings line " + std::to_string(lineno) + ": expected user, item, rating, timestamp");
    }
    first_content = false;
    if (r.item >= opts.id_lo && r.item <= opts.id_hi) kept.push_back(r);
  }
  if (kept.empty()) fail(ErrorKind::data, "empty dataset");

  std::int64_t t0 = kept.front().timestamp;
  for (const auto& r : kept) t0 = std::min(t0, r.timestamp);
  const int n_files = opts.id_hi - opts.id_lo + 1;
  std::map<std::int64_t, Vector> buckets;
  for (const auto& r : kept) {
    const auto slot = static_cast<std::int64_t>(std::floor(static_cast<double>(r.timestamp - t0) / opts.slot_seconds));
    auto [it, fresh] = buckets.try_emplace(slot, Vector::Zero(n_files));
    it->second[r.item - opts.id_lo] += r.rating;
  }

  MovieLensData out;
  out.rows_used = static_cast<long>(kept.size());
  std::vector<Vector> sums;
  std::int64_t expected = buckets.begin()->first;
  for (const auto& [slot, v] : buckets) {
    for (; expected < slot; ++expected) out.gaps.push_back(expected);
    expected = slot + 1;
    if (!(v.sum() > 0.0)) {  // only zero ratings in this slot
      out.gaps.push_back(slot);
      continue;
    }
    out.slots.push_back(slot);
    out.profiles.push_back(PopularityProfile::normalized(v));
    sums.push_back(v);
  }
  if (out.profiles.empty()) fail(ErrorKind::data, "empty dataset");
  out.rating_sums.resize(n_files, static_cast<Eigen::Index>(sums.size()));
  for (std::size_t s = 0; s < sums.size(); ++s) out.rating_sums.col(static_cast<Eigen::Index>(s)) = sums[s];
  return out;
}

MovieLensData load_movielens(const std::string& path, const MovieLensOptions& opts) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::data, "cannot open ratings file '" + path + "'");
  return parse_movielens(in, opts);
}

}  // namespace edgecache
