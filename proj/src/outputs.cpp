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

#include "edgecache/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

namespace edgecache {
namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

// Minimal line chart: linear axes, five ticks each, legend on the right.
void write_svg(std::ostream& out, const std::string& title, const std::string& x_label,
               const std::string& y_label, const std::vector<Series>& series) {
  constexpr double W = 760, H = 420, left = 80, right = 170, top = 40, bottom = 60;
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (const auto& s : series) {
    for (double v : s.x) x0 = std::min(x0, v), x1 = std::max(x1, v);
    for (double v : s.y) y0 = std::min(y0, v), y1 = std::max(y1, v);
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) {
    y0 -= 0.5 * std::max(std::abs(y0), 1e-12);
    y1 = y0 + std::max(std::abs(y0), 1e-12);
  }
  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double v) { return left + (v - x0) / (x1 - x0) * pw; };
  auto py = [&](double v) { return top + (1.0 - (v - y0) / (y1 - y0)) * ph; };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
    out << "<text x=\"" << px(xv) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
        << format_number(xv) << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
        << format_number(yv) << "</text>\n";
    out << "<line x1=\"" << left << "\" x2=\"" << left + pw << "\" y1=\"" << py(yv) << "\" y2=\"" << py(yv)
        << "\" stroke=\"#ddd\"/>\n";
  }
  out << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">" << x_label
      << "</text>\n";
  out << "<text transform=\"translate(18," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
      << y_label << "</text>\n";
  for (std::size_t i = 0; i < series.size(); ++i) {
    const char* color = kPalette[i % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t j = 0; j < series[i].x.size(); ++j)
      out << (j ? " " : "") << px(series[i].x[j]) << ',' << py(series[i].y[j]);
    out << "\"/>\n";
    const double ly = top + 14.0 * static_cast<double>(i) + 8;
    out << "<line x1=\"" << W - right + 10 << "\" x2=\"" << W - right + 30 << "\" y1=\"" << ly << "\" y2=\""
        << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << W - right + 35 << "\" y=\"" << ly + 4 << "\">" << series[i].label << "</text>\n";
  }
  out << "</svg>\n";
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::data, "cannot write '" + path.string() + "'");
  return out;
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) fail(ErrorKind::data, "cannot create output directory '" + dir + "'");
}

void check_table(const ExperimentTable& table) {
  if (table.models.empty() || table.slots < 1) fail(ErrorKind::invalid_argument, "empty table");
}

}  // namespace

std::string format_number(double x) {
  if (!std::isfinite(x)) fail(ErrorKind::numerical, "non-finite value in output");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x == 0.0 ? 0.0 : x);
  return buf;
}

void write_metrics_csv(std::ostream& out, const ExperimentTable& table) {
  check_table(table);
  out << "scenario,model,slot,metric,value,stderr\n";
  for (std::size_t m = 0; m < table.models.size(); ++m)
    for (int s = 0; s < table.slots; ++s)
      for (std::size_t j = 0; j < kMetricNames.size(); ++j) {
        const Stat& st = table.per_slot[m][j][static_cast<std::size_t>(s)];
        out << table.scenario << ',' << table.models[m] << ',' << s + 1 << ',' << kMetricNames[j] << ','
            << format_number(st.mean) << ',' << format_number(st.stderr_) << '\n';
      }
}

void write_summary(std::ostream& out, const ExperimentTable& table) {
  check_table(table);
  out << "scenario: " << table.scenario << "\n";
  out << "replications: " << table.replications << " succeeded, " << table.failures.size() << " failed\n";
  out << "slots per replication: " << table.slots << "\n\n";
  char line[160];
  std::snprintf(line, sizeof line, "%-12s %-20s %-34s\n", "model", "metric", "mean +/- stderr");
  out << line;
  for (std::size_t m = 0; m < table.models.size(); ++m)
    for (std::size_t j = 0; j < kMetricNames.size(); ++j) {
      const Stat& st = table.overall[m][j];
      const std::string cell = format_number(st.mean) + " +/- " + format_number(st.stderr_);
      std::snprintf(line, sizeof line, "%-12s %-20s %s\n", table.models[m].c_str(), kMetricNames[j], cell.c_str());
      out << line;
    }
  for (const auto& f : table.failures) out << "failed " << f << '\n';
}

void write_slot_svg(std::ostream& out, const ExperimentTable& table, std::size_t metric) {
  check_table(table);
  std::vector<Series> series;
  for (std::size_t m = 0; m < table.models.size(); ++m) {
    Series s{table.models[m], {}, {}};
    for (int t = 0; t < table.slots; ++t) {
      s.x.push_back(t + 1);
      s.y.push_back(table.per_slot[m][metric][static_cast<std::size_t>(t)].mean);
    }
    series.push_back(std::move(s));
  }
  write_svg(out, table.scenario + ": " + kMetricNames[metric], "slot", kMetricNames[metric], series);
}

void emit_outputs(const ExperimentTable& table, const std::string& dir) {
  check_table(table);
  make_dir(dir);
  const std::filesystem::path root(dir);
  {
    auto f = open_output(root / "metrics.csv");
    write_metrics_csv(f, table);
  }
  {
    auto f = open_output(root / "summary.txt");
    write_summary(f, table);
  }
  for (std::size_t j = 0; j < kMetricNames.size(); ++j) {
    auto f = open_output(root / (std::string(kMetricNames[j]) + ".svg"));
    write_slot_svg(f, table, j);
  }
}

void write_sweep_csv(std::ostream& out, const std::string& axis, const std::vector<SweepPoint>& points) {
  if (points.empty()) fail(ErrorKind::invalid_argument, "empty sweep");
  out << "axis,value,model,metric,mean,stderr\n";
  for (const auto& p : points)
    for (std::size_t m = 0; m < p.table.models.size(); ++m)
      for (std::size_t j = 0; j < kMetricNames.size(); ++j)
        out << axis << ',' << format_number(p.value) << ',' << p.table.models[m] << ',' << kMetricNames[j] << ','
            << format_number(p.table.overall[m][j].mean) << ',' << format_number(p.table.overall[m][j].stderr_)
            << '\n';
}

void emit_sweep_outputs(const std::string& axis, const std::vector<SweepPoint>& points, const std::string& dir) {
  if (points.empty()) fail(ErrorKind::invalid_argument, "empty sweep");
  make_dir(dir);
  const std::filesystem::path root(dir);
  {
    auto f = open_output(root / "sweep.csv");
    write_sweep_csv(f, axis, points);
  }
  const auto& models = points.front().table.models;
  for (std::size_t j = 0; j < kMetricNames.size(); ++j) {
    std::vector<Series> series;
    for (std::size_t m = 0; m < models.size(); ++m) {
      Series s{models[m], {}, {}};
      for (const auto& p : points) {
        s.x.push_back(p.value);
        s.y.push_back(p.table.overall[m][j].mean);
      }
      series.push_back(std::move(s));
    }
    auto f = open_output(root / (std::string(kMetricNames[j]) + ".svg"));
    write_svg(f, "sweep over " + axis + ": " + kMetricNames[j], axis, kMetricNames[j], series);
  }
  for (const auto& p : points) emit_outputs(p.table, (root / (axis + "_" + format_number(p.value))).string());
}

}  // namespace edgecache
