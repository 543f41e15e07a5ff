// Copyright 2026 The maskcoref Authors.
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

#include "maskcoref/report.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "maskcoref/error.h"
#include "text_util.h"

namespace maskcoref {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

const char *const kPalette[] = {"#4c72b0", "#dd8452", "#55a868",
                                "#c44e52", "#8172b3", "#937860"};

std::string F(double v) { return internal::FormatFixed(v, 2); }

std::string Escape(const std::string &text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string CsvField(const std::string &text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Tick positions at 1, 2 or 5 times a power of ten.
std::vector<double> NiceTicks(double lo, double hi, int target = 5) {
  if (!(hi > lo)) hi = lo + 1.0;
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step - 1e-9) * step; t <= hi + 1e-9 * step; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

std::string TickLabel(double v) {
  std::string s = internal::FormatFixed(v, 3);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s == "-0" ? "0" : s;
}

class Canvas {
 public:
  explicit Canvas(const std::string &title) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << F(kWidth)
         << "\" height=\"" << F(kHeight) << "\" viewBox=\"0 0 " << F(kWidth) << ' '
         << F(kHeight) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    Text(kWidth / 2, 22, title, "middle", 14);
  }

  void Text(double x, double y, const std::string &text, const char *anchor,
            int size = 12, double rotate = 0.0) {
    out_ << "<text x=\"" << F(x) << "\" y=\"" << F(y) << "\" text-anchor=\"" << anchor
         << "\" font-size=\"" << size << "\"";
    if (rotate != 0.0) {
      out_ << " transform=\"rotate(" << F(rotate) << ' ' << F(x) << ' ' << F(y) << ")\"";
    }
    out_ << ">" << Escape(text) << "</text>\n";
  }
  void Line(double x1, double y1, double x2, double y2, const char *stroke = "black",
            double width = 1.0) {
    out_ << "<line x1=\"" << F(x1) << "\" y1=\"" << F(y1) << "\" x2=\"" << F(x2)
         << "\" y2=\"" << F(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
         << F(width) << "\"/>\n";
  }
  void Rect(double x, double y, double w, double h, const char *fill,
            const char *stroke = "none") {
    out_ << "<rect x=\"" << F(x) << "\" y=\"" << F(y) << "\" width=\"" << F(w)
         << "\" height=\"" << F(h) << "\" fill=\"" << fill << "\" stroke=\"" << stroke
         << "\"/>\n";
  }
  void Circle(double x, double y, double r, const char *fill, double opacity = 1.0) {
    out_ << "<circle cx=\"" << F(x) << "\" cy=\"" << F(y) << "\" r=\"" << F(r)
         << "\" fill=\"" << fill << "\" fill-opacity=\"" << F(opacity) << "\"/>\n";
  }
  void Polyline(const std::vector<Point2> &points, const char *stroke, double width) {
    out_ << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
         << F(width) << "\" points=\"";
    for (size_t i = 0; i < points.size(); ++i) {
      out_ << (i ? " " : "") << F(points[i].x) << ',' << F(points[i].y);
    }
    out_ << "\"/>\n";
  }

  std::string Finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  std::ostringstream out_;
};

// Maps data coordinates into the plot area.
struct Frame {
  double x_lo = 0.0, x_hi = 1.0, y_lo = 0.0, y_hi = 1.0;

  double X(double v) const {
    return kLeft + (v - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight);
  }
  double Y(double v) const {
    return kHeight - kBottom - (v - y_lo) / (y_hi - y_lo) * (kHeight - kTop - kBottom);
  }
};

void DrawYAxis(Canvas &canvas, const Frame &frame, const std::string &label) {
  canvas.Line(kLeft, kTop, kLeft, kHeight - kBottom);
  for (double t : NiceTicks(frame.y_lo, frame.y_hi)) {
    canvas.Line(kLeft - 4, frame.Y(t), kLeft, frame.Y(t));
    canvas.Text(kLeft - 7, frame.Y(t) + 4, TickLabel(t), "end", 10);
  }
  canvas.Text(18, (kTop + kHeight - kBottom) / 2, label, "middle", 12, -90.0);
}

void DrawXAxis(Canvas &canvas, const Frame &frame, const std::string &label,
               bool numeric) {
  canvas.Line(kLeft, kHeight - kBottom, kWidth - kRight, kHeight - kBottom);
  if (numeric) {
    for (double t : NiceTicks(frame.x_lo, frame.x_hi)) {
      canvas.Line(frame.X(t), kHeight - kBottom, frame.X(t), kHeight - kBottom + 4);
      canvas.Text(frame.X(t), kHeight - kBottom + 16, TickLabel(t), "middle", 10);
    }
  }
  canvas.Text((kLeft + kWidth - kRight) / 2, kHeight - 14, label, "middle");
}

// Distinct values in order of first appearance.
std::vector<std::string> Levels(const std::vector<std::string> &values) {
  std::vector<std::string> levels;
  for (const std::string &v : values) {
    if (std::find(levels.begin(), levels.end(), v) == levels.end()) levels.push_back(v);
  }
  return levels;
}

void RequireRows(const DataTable &data) {
  if (data.rows() == 0) throw Error(ErrorCode::kEmptyData, "figure has no data rows");
}

std::string RenderBars(const FigureSpec &spec, const DataTable &data) {
  const std::vector<std::string> &category = data.Text(spec.category_column);
  const std::vector<double> &value = data.Numeric(spec.value_column);
  const std::vector<std::string> group =
      spec.group_column.empty() ? std::vector<std::string>(category.size(), "")
                                : data.Text(spec.group_column);
  RequireRows(data);
  const std::vector<std::string> categories = Levels(category);
  const std::vector<std::string> groups = Levels(group);
  Frame frame;
  frame.y_hi = std::max(1.0, *std::max_element(value.begin(), value.end()));
  frame.y_lo = std::min(0.0, *std::min_element(value.begin(), value.end()));
  Canvas canvas(spec.title);
  DrawYAxis(canvas, frame, spec.y_label);
  DrawXAxis(canvas, frame, spec.x_label, false);

  const double slot = (kWidth - kLeft - kRight) / static_cast<double>(categories.size());
  const double bar = slot * 0.8 / static_cast<double>(groups.size());
  for (size_t c = 0; c < categories.size(); ++c) {
    const double x0 = kLeft + slot * static_cast<double>(c) + slot * 0.1;
    canvas.Text(x0 + slot * 0.4, kHeight - kBottom + 16, categories[c], "middle", 10);
    for (size_t i = 0; i < category.size(); ++i) {
      if (category[i] != categories[c]) continue;
      const size_t g = std::find(groups.begin(), groups.end(), group[i]) - groups.begin();
      const double top = frame.Y(std::max(value[i], 0.0));
      const double bottom = frame.Y(std::min(value[i], 0.0));
      canvas.Rect(x0 + bar * static_cast<double>(g), top, bar * 0.95, bottom - top,
                  kPalette[g % 6]);
    }
  }
  if (groups.size() > 1) {
    for (size_t g = 0; g < groups.size(); ++g) {
      const double y = kTop + 14.0 * static_cast<double>(g);
      canvas.Rect(kWidth - kRight - 110, y - 9, 10, 10, kPalette[g % 6]);
      canvas.Text(kWidth - kRight - 95, y, groups[g], "start", 10);
    }
  }
  return canvas.Finish();
}

std::string RenderBox(const FigureSpec &spec, const DataTable &data) {
  const std::vector<std::string> &category = data.Text(spec.category_column);
  const std::vector<double> &value = data.Numeric(spec.value_column);
  RequireRows(data);
  const std::vector<std::string> categories = Levels(category);
  std::vector<double> all(value.begin(), value.end());
  std::sort(all.begin(), all.end());
  Frame frame;
  frame.y_lo = std::min(0.0, all.front());
  frame.y_hi = spec.clip_quantile.has_value() ? Quantile7(all, *spec.clip_quantile)
                                              : all.back();
  if (!(frame.y_hi > frame.y_lo)) frame.y_hi = frame.y_lo + 1.0;
  auto clip = [&](double v) { return std::clamp(v, frame.y_lo, frame.y_hi); };

  Canvas canvas(spec.title);
  DrawYAxis(canvas, frame, spec.y_label);
  DrawXAxis(canvas, frame, spec.x_label, false);
  const double slot = (kWidth - kLeft - kRight) / static_cast<double>(categories.size());
  for (size_t c = 0; c < categories.size(); ++c) {
    std::vector<double> values;
    for (size_t i = 0; i < category.size(); ++i) {
      if (category[i] == categories[c]) values.push_back(value[i]);
    }
    const BoxStats box = ComputeBoxStats(values);
    const double mid = kLeft + slot * (static_cast<double>(c) + 0.5);
    const double half = slot * 0.25;
    const char *color = kPalette[c % 6];
    canvas.Line(mid, frame.Y(clip(box.lower_whisker)), mid, frame.Y(clip(box.q1)));
    canvas.Line(mid, frame.Y(clip(box.q3)), mid, frame.Y(clip(box.upper_whisker)));
    canvas.Rect(mid - half, frame.Y(clip(box.q3)), 2 * half,
                frame.Y(clip(box.q1)) - frame.Y(clip(box.q3)), color, "black");
    canvas.Line(mid - half, frame.Y(clip(box.median)), mid + half,
                frame.Y(clip(box.median)), "black", 2.0);
    for (double o : box.outliers) {
      if (o >= frame.y_lo && o <= frame.y_hi) canvas.Circle(mid, frame.Y(o), 1.5, "black");
    }
    canvas.Text(mid, kHeight - kBottom + 16, categories[c], "middle", 10);
  }
  return canvas.Finish();
}

std::string RenderScatter(const FigureSpec &spec, const DataTable &data) {
  const std::vector<double> &x = data.Numeric(spec.x_column);
  const std::vector<double> &y = data.Numeric(spec.value_column);
  RequireRows(data);
  const std::vector<Point2> trend = SmoothTrend(x, y, spec.smooth_span);
  Frame frame;
  frame.x_lo = *std::min_element(x.begin(), x.end());
  frame.x_hi = *std::max_element(x.begin(), x.end());
  frame.y_lo = std::min(0.0, *std::min_element(y.begin(), y.end()));
  frame.y_hi = *std::max_element(y.begin(), y.end());
  if (!(frame.x_hi > frame.x_lo)) frame.x_hi = frame.x_lo + 1.0;
  if (!(frame.y_hi > frame.y_lo)) frame.y_hi = frame.y_lo + 1.0;
  Canvas canvas(spec.title);
  DrawYAxis(canvas, frame, spec.y_label);
  DrawXAxis(canvas, frame, spec.x_label, true);
  for (size_t i = 0; i < x.size(); ++i) {
    canvas.Circle(frame.X(x[i]), frame.Y(y[i]), 2.0, kPalette[0], 0.4);
  }
  std::vector<Point2> line;
  for (const Point2 &p : trend) {
    line.push_back({frame.X(p.x), frame.Y(std::clamp(p.y, frame.y_lo, frame.y_hi))});
  }
  canvas.Polyline(line, kPalette[3], 2.0);
  return canvas.Finish();
}

std::string RenderTernary(const FigureSpec &spec, const DataTable &data) {
  const std::vector<double> &p1 = data.Numeric(spec.ternary[0]);
  const std::vector<double> &p2 = data.Numeric(spec.ternary[1]);
  const std::vector<double> &p3 = data.Numeric(spec.ternary[2]);
  RequireRows(data);
  std::vector<Point2> points;
  for (size_t i = 0; i < p1.size(); ++i) {
    points.push_back(TernaryCoordinates(p1[i], p2[i], p3[i]));
  }
  // Unit triangle (0,0), (1,0), (1/2, sqrt(3)/2) scaled into the plot area.
  const double side = std::min(kWidth - kLeft - kRight, (kHeight - kTop - kBottom) / 0.8660254037844386);
  const double x0 = (kWidth - side) / 2.0;
  const double y0 = kHeight - kBottom;
  auto map = [&](Point2 p) { return Point2{x0 + p.x * side, y0 - p.y * side}; };
  Canvas canvas(spec.title);
  const Point2 corners[] = {map({0, 0}), map({1, 0}), map({0.5, 0.8660254037844386})};
  for (int i = 0; i < 3; ++i) {
    const Point2 a = corners[i], b = corners[(i + 1) % 3];
    canvas.Line(a.x, a.y, b.x, b.y);
  }
  canvas.Text(corners[0].x, corners[0].y + 16, spec.corner_labels[0], "middle");
  canvas.Text(corners[1].x, corners[1].y + 16, spec.corner_labels[1], "middle");
  canvas.Text(corners[2].x, corners[2].y - 6, spec.corner_labels[2], "middle");
  for (const Point2 &p : points) {
    const Point2 q = map(p);
    canvas.Circle(q.x, q.y, 2.0, kPalette[0], 0.5);
  }
  return canvas.Finish();
}

}  // namespace

void DataTable::AddNumeric(const std::string &name, std::vector<double> values) {
  if (!Has(name)) order_.push_back(name);
  columns_[name] = std::move(values);
}

void DataTable::AddText(const std::string &name, std::vector<std::string> values) {
  if (!Has(name)) order_.push_back(name);
  columns_[name] = std::move(values);
}

const std::vector<double> &DataTable::Numeric(const std::string &name) const {
  auto it = columns_.find(name);
  if (it == columns_.end() || !std::holds_alternative<std::vector<double>>(it->second)) {
    throw Error(ErrorCode::kUnknownColumn, "no numeric column '" + name + "'");
  }
  return std::get<std::vector<double>>(it->second);
}

const std::vector<std::string> &DataTable::Text(const std::string &name) const {
  auto it = columns_.find(name);
  if (it == columns_.end() ||
      !std::holds_alternative<std::vector<std::string>>(it->second)) {
    throw Error(ErrorCode::kUnknownColumn, "no text column '" + name + "'");
  }
  return std::get<std::vector<std::string>>(it->second);
}

int DataTable::rows() const {
  int rows = 0;
  for (const auto &[name, column] : columns_) {
    std::visit([&](const auto &v) { rows = std::max(rows, static_cast<int>(v.size())); },
               column);
  }
  return rows;
}

std::string DataTable::ToCsv(const std::vector<std::string> &comments) const {
  std::string out;
  for (const std::string &c : comments) out += "# " + c + "\n";
  for (size_t j = 0; j < order_.size(); ++j) {
    out += (j ? "," : "") + CsvField(order_[j]);
  }
  out += "\n";
  const int n = rows();
  for (int i = 0; i < n; ++i) {
    for (size_t j = 0; j < order_.size(); ++j) {
      if (j) out += ",";
      const auto &column = columns_.at(order_[j]);
      if (const auto *num = std::get_if<std::vector<double>>(&column)) {
        if (i < static_cast<int>(num->size())) out += internal::FormatDouble((*num)[i]);
      } else {
        const auto &text = std::get<std::vector<std::string>>(column);
        if (i < static_cast<int>(text.size())) out += CsvField(text[i]);
      }
    }
    out += "\n";
  }
  return out;
}

double Quantile7(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::kEmptyData, "quantile of no values");
  const double h = (static_cast<double>(sorted.size()) - 1.0) * q;
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxStats ComputeBoxStats(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  BoxStats box;
  box.q1 = Quantile7(sorted, 0.25);
  box.median = Quantile7(sorted, 0.5);
  box.q3 = Quantile7(sorted, 0.75);
  const double iqr = box.q3 - box.q1;
  const double lo_fence = box.q1 - 1.5 * iqr;
  const double hi_fence = box.q3 + 1.5 * iqr;
  box.lower_whisker = box.q1;
  box.upper_whisker = box.q3;
  for (double v : sorted) {
    if (v < lo_fence || v > hi_fence) {
      box.outliers.push_back(v);
    } else {
      box.lower_whisker = std::min(box.lower_whisker, v);
      box.upper_whisker = std::max(box.upper_whisker, v);
    }
  }
  return box;
}

Point2 TernaryCoordinates(double p1, double p2, double p3) {
  if (p1 < 0.0 || p2 < 0.0 || p3 < 0.0) {
    throw Error(ErrorCode::kNegativeProbability, "ternary coordinates need p >= 0");
  }
  const double s = p1 + p2 + p3;
  if (!(s > 0.0)) throw Error(ErrorCode::kEmptyData, "ternary point with zero mass");
  return {0.5 * (2.0 * p2 + p3) / s, 0.8660254037844386 * p3 / s};
}

double LocalLinearAt(std::span<const double> x, std::span<const double> y, double span,
                     double at) {
  const size_t n = x.size();
  if (n < 10 || y.size() != n) {
    throw Error(ErrorCode::kTooFewPoints,
                "smoothing needs at least 10 paired points, got " + std::to_string(n));
  }
  std::vector<double> dist(n);
  for (size_t i = 0; i < n; ++i) dist[i] = std::abs(x[i] - at);
  std::vector<double> sorted = dist;
  std::sort(sorted.begin(), sorted.end());
  const size_t k = std::clamp<size_t>(
      static_cast<size_t>(std::ceil(span * static_cast<double>(n))), 2, n);
  double h = sorted[k - 1];
  // Widen past ties at zero distance so the neighbourhood has some extent.
  for (size_t j = k; h <= 0.0 && j < n; ++j) h = sorted[j];
  if (h <= 0.0) h = 1.0;
  h *= 1.0 + 1e-9;
  double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
  for (size_t i = 0; i < n; ++i) {
    const double u = dist[i] / h;
    if (u >= 1.0) continue;
    const double w = std::pow(1.0 - u * u * u, 3);
    const double d = x[i] - at;
    s0 += w;
    s1 += w * d;
    s2 += w * d * d;
    t0 += w * y[i];
    t1 += w * d * y[i];
  }
  const double det = s0 * s2 - s1 * s1;
  if (det <= 1e-12 * s0 * s2 || det <= 0.0) return t0 / s0;  // locally constant x
  return (s2 * t0 - s1 * t1) / det;
}

std::vector<Point2> SmoothTrend(std::span<const double> x, std::span<const double> y,
                                double span, int grid) {
  if (x.size() < 10) {
    throw Error(ErrorCode::kTooFewPoints,
                "smoothing needs at least 10 points, got " + std::to_string(x.size()));
  }
  const double lo = *std::min_element(x.begin(), x.end());
  const double hi = *std::max_element(x.begin(), x.end());
  std::vector<Point2> line;
  for (int g = 0; g < grid; ++g) {
    const double at =
        grid == 1 ? lo : lo + (hi - lo) * static_cast<double>(g) / (grid - 1);
    line.push_back({at, LocalLinearAt(x, y, span, at)});
  }
  return line;
}

std::string RenderSvg(const FigureSpec &spec, const DataTable &data) {
  switch (spec.kind) {
    case FigureKind::kBars: return RenderBars(spec, data);
    case FigureKind::kBox: return RenderBox(spec, data);
    case FigureKind::kScatterSmooth: return RenderScatter(spec, data);
    case FigureKind::kTernary: return RenderTernary(spec, data);
  }
  return "";
}

}  // namespace maskcoref
