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

#include "aebsim/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>

namespace aebsim::svg
{

namespace
{

constexpr double kWidth = 900.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 180.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 90.0;
constexpr std::array<const char *, 8> kPalette{
  "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string escape(const std::string & s)
{
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

double nice_ceiling(double x)
{
  if (!(x > 0.0) || !std::isfinite(x)) {
    return 1.0;
  }
  const double mag = std::pow(10.0, std::floor(std::log10(x)));
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (m * mag >= x) {
      return m * mag;
    }
  }
  return 10.0 * mag;
}

struct Frame
{
  double lo;
  double hi;
  double y(double v) const
  {
    const double h = kHeight - kTop - kBottom;
    return kTop + h * (1.0 - (v - lo) / (hi - lo));
  }
};

void header(std::string & out, const std::string & title)
{
  auto it = std::back_inserter(out);
  fmt::format_to(
    it,
    "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\" "
    "font-family=\"sans-serif\" font-size=\"12\">\n",
    kWidth, kHeight);
  fmt::format_to(it, "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
  fmt::format_to(
    it, "<text x=\"{}\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">{}</text>\n", kWidth / 2,
    escape(title));
}

void axes(std::string & out, const Frame & f, const std::string & y_label)
{
  auto it = std::back_inserter(out);
  const double x1 = kWidth - kRight;
  for (int k = 0; k <= 5; ++k) {
    const double v = f.lo + (f.hi - f.lo) * k / 5.0;
    const double y = f.y(v);
    fmt::format_to(
      it, "<line x1=\"{}\" y1=\"{:.2f}\" x2=\"{}\" y2=\"{:.2f}\" stroke=\"#ddd\"/>\n", kLeft, y, x1, y);
    fmt::format_to(
      it, "<text x=\"{}\" y=\"{:.2f}\" text-anchor=\"end\">{:.3g}</text>\n", kLeft - 6, y + 4, v);
  }
  fmt::format_to(
    it, "<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", kLeft, kTop,
    kHeight - kBottom);
  fmt::format_to(
    it, "<line x1=\"{0}\" y1=\"{2:.2f}\" x2=\"{1}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", kLeft, x1,
    f.y(std::max(f.lo, 0.0)));
  fmt::format_to(
    it,
    "<text transform=\"translate(18,{}) rotate(-90)\" text-anchor=\"middle\">{}</text>\n",
    (kTop + kHeight - kBottom) / 2, escape(y_label));
}

void legend(std::string & out, const std::vector<std::string> & names)
{
  auto it = std::back_inserter(out);
  for (std::size_t i = 0; i < names.size(); ++i) {
    const double y = kTop + 20.0 * static_cast<double>(i);
    fmt::format_to(
      it, "<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\"/>\n", kWidth - kRight + 15, y,
      kPalette[i % kPalette.size()]);
    fmt::format_to(
      it, "<text x=\"{}\" y=\"{}\">{}</text>\n", kWidth - kRight + 32, y + 10, escape(names[i]));
  }
}

double quantile(const std::vector<double> & sorted, double q)
{
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

std::string grouped_bars(
  const std::string & title, const std::string & y_label, const std::vector<std::string> & categories,
  const std::vector<BarSeries> & series)
{
  double top = 0.0;
  for (const auto & s : series) {
    for (double v : s.values) {
      if (std::isfinite(v)) {
        top = std::max(top, v);
      }
    }
  }
  const Frame f{0.0, nice_ceiling(top)};
  std::string out;
  header(out, title);
  axes(out, f, y_label);
  auto it = std::back_inserter(out);
  const double plot_w = kWidth - kLeft - kRight;
  const double group_w = categories.empty() ? plot_w : plot_w / static_cast<double>(categories.size());
  const double bar_w = series.empty() ? 0.0 : group_w * 0.8 / static_cast<double>(series.size());
  for (std::size_t c = 0; c < categories.size(); ++c) {
    const double gx = kLeft + group_w * static_cast<double>(c);
    for (std::size_t s = 0; s < series.size(); ++s) {
      const double v = c < series[s].values.size() ? series[s].values[c] : 0.0;
      const double h = std::isfinite(v) ? f.y(0.0) - f.y(v) : 0.0;
      fmt::format_to(
        it, "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\"/>\n",
        gx + group_w * 0.1 + bar_w * static_cast<double>(s), f.y(0.0) - h, bar_w, h,
        kPalette[s % kPalette.size()]);
    }
    fmt::format_to(
      it,
      "<text transform=\"translate({:.2f},{}) rotate(30)\" text-anchor=\"start\">{}</text>\n",
      gx + group_w * 0.3, kHeight - kBottom + 16, escape(categories[c]));
  }
  std::vector<std::string> names;
  for (const auto & s : series) {
    names.push_back(s.name);
  }
  legend(out, names);
  out += "</svg>\n";
  return out;
}

std::string box_plot(
  const std::string & title, const std::string & y_label, const std::vector<Distribution> & groups)
{
  double lo = 0.0;
  double hi = 0.0;
  for (const auto & g : groups) {
    for (double v : g.values) {
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  const Frame f{lo < 0.0 ? -nice_ceiling(-lo) : 0.0, nice_ceiling(hi)};
  std::string out;
  header(out, title);
  axes(out, f, y_label);
  auto it = std::back_inserter(out);
  const double plot_w = kWidth - kLeft - kRight;
  const double slot = groups.empty() ? plot_w : plot_w / static_cast<double>(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) {
    std::vector<double> v;
    std::copy_if(
      groups[i].values.begin(), groups[i].values.end(), std::back_inserter(v),
      [](double x) { return std::isfinite(x); });
    const double cx = kLeft + slot * (static_cast<double>(i) + 0.5);
    fmt::format_to(
      it,
      "<text transform=\"translate({:.2f},{}) rotate(30)\" text-anchor=\"start\">{}</text>\n",
      cx - 10, kHeight - kBottom + 16, escape(groups[i].label));
    if (v.empty()) {
      continue;
    }
    std::sort(v.begin(), v.end());
    double mean = 0.0;
    for (double x : v) {
      mean += x;
    }
    mean /= static_cast<double>(v.size());
    const double w = std::min(40.0, slot * 0.5);
    const char * color = kPalette[i % kPalette.size()];
    fmt::format_to(
      it, "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{2:.2f}\" stroke=\"black\"/>\n", cx,
      f.y(quantile(v, 0.05)), f.y(quantile(v, 0.95)));
    const double q1 = f.y(quantile(v, 0.25));
    const double q3 = f.y(quantile(v, 0.75));
    fmt::format_to(
      it,
      "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"{}\" "
      "fill-opacity=\"0.6\" stroke=\"black\"/>\n",
      cx - w / 2, q3, w, std::max(q1 - q3, 0.5), color);
    const double med = f.y(quantile(v, 0.5));
    fmt::format_to(
      it, "<line x1=\"{:.2f}\" y1=\"{:.2f}\" x2=\"{:.2f}\" y2=\"{:.2f}\" stroke=\"black\" "
          "stroke-width=\"2\"/>\n",
      cx - w / 2, med, cx + w / 2, med);
    fmt::format_to(
      it, "<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"white\" stroke=\"black\"/>\n", cx,
      f.y(mean));
  }
  out += "</svg>\n";
  return out;
}

std::string time_series(
  const std::string & title, const std::vector<double> & t, const std::vector<Line> & lines)
{
  double lo = 0.0;
  double hi = 0.0;
  for (const auto & l : lines) {
    for (double v : l.y) {
      if (std::isfinite(v)) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
  }
  const Frame f{lo < 0.0 ? -nice_ceiling(-lo) : 0.0, nice_ceiling(hi)};
  std::string out;
  header(out, title);
  axes(out, f, "");
  auto it = std::back_inserter(out);
  const double t0 = t.empty() ? 0.0 : t.front();
  const double t1 = t.empty() ? 1.0 : std::max(t.back(), t0 + 1e-9);
  const double plot_w = kWidth - kLeft - kRight;
  auto x = [&](double tt) { return kLeft + plot_w * (tt - t0) / (t1 - t0); };
  for (int k = 0; k <= 5; ++k) {
    const double tt = t0 + (t1 - t0) * k / 5.0;
    fmt::format_to(
      it, "<text x=\"{:.2f}\" y=\"{}\" text-anchor=\"middle\">{:.3g}</text>\n", x(tt),
      kHeight - kBottom + 16, tt);
  }
  fmt::format_to(
    it, "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">t [s]</text>\n", kLeft + plot_w / 2,
    kHeight - kBottom + 36);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    names.push_back(lines[i].name);
    std::string path;
    bool pen_down = false;
    for (std::size_t k = 0; k < std::min(t.size(), lines[i].y.size()); ++k) {
      const double v = lines[i].y[k];
      if (!std::isfinite(v)) {
        pen_down = false;
        continue;
      }
      fmt::format_to(
        std::back_inserter(path), "{}{:.2f},{:.2f} ", pen_down ? "L" : "M", x(t[k]), f.y(v));
      pen_down = true;
    }
    fmt::format_to(
      it, "<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n", path,
      kPalette[i % kPalette.size()]);
  }
  legend(out, names);
  out += "</svg>\n";
  return out;
}

}  // namespace aebsim::svg
