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

// Static SVG figures and the tidy CSV tables behind them. Output is a pure
// function of the input: no timestamps, no generated ids.

#ifndef MASKCOREF_REPORT_H_
#define MASKCOREF_REPORT_H_

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace maskcoref {

// Columns of numbers or strings, kept in insertion order.
class DataTable {
 public:
  void AddNumeric(const std::string &name, std::vector<double> values);
  void AddText(const std::string &name, std::vector<std::string> values);

  bool Has(const std::string &name) const { return columns_.count(name) > 0; }
  // Throw UnknownColumn.
  const std::vector<double> &Numeric(const std::string &name) const;
  const std::vector<std::string> &Text(const std::string &name) const;
  int rows() const;
  const std::vector<std::string> &column_names() const { return order_; }

  // "# "-prefixed comment lines, a header row, then the data.
  std::string ToCsv(const std::vector<std::string> &comments) const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::variant<std::vector<double>, std::vector<std::string>>>
      columns_;
};

// Type-7 quantile (linear interpolation between order statistics) of sorted
// values; q in [0, 1]. Throws EmptyData.
double Quantile7(std::span<const double> sorted, double q);

struct BoxStats {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double lower_whisker = 0.0;  // most extreme data within 1.5 IQR
  double upper_whisker = 0.0;
  std::vector<double> outliers;
};
BoxStats ComputeBoxStats(std::span<const double> values);

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

// x = (2 p2 + p3) / (2 s), y = (sqrt(3) / 2) p3 / s with s = p1 + p2 + p3.
// Throws NegativeProbability and EmptyData (all zero).
Point2 TernaryCoordinates(double p1, double p2, double p3);

// Local linear regression with tricube weights; `span` is the fraction of
// points in each neighbourhood. Throws TooFewPoints below 10 points.
double LocalLinearAt(std::span<const double> x, std::span<const double> y,
                     double span, double at);
// The smoother evaluated on `grid` evenly spaced points over [min x, max x].
std::vector<Point2> SmoothTrend(std::span<const double> x, std::span<const double> y,
                                double span, int grid = 100);

enum class FigureKind { kBars, kBox, kScatterSmooth, kTernary };

struct FigureSpec {
  FigureKind kind = FigureKind::kBars;
  std::string title;
  std::string x_label;
  std::string y_label;
  // kBars: category (text), value (numeric), optional group (text).
  // kBox: category (text), value (numeric).
  // kScatterSmooth: x and value (numeric).
  // kTernary: the three probability columns in `ternary`, `corner_labels`.
  std::string category_column;
  std::string value_column;
  std::string group_column;
  std::string x_column;
  std::array<std::string, 3> ternary;
  std::array<std::string, 3> corner_labels;
  // Clip the y axis at this quantile of the data (kBox).
  std::optional<double> clip_quantile;
  double smooth_span = 0.3;
};

// Throws UnknownColumn, EmptyData, NegativeProbability, TooFewPoints.
std::string RenderSvg(const FigureSpec &spec, const DataTable &data);

}  // namespace maskcoref

#endif  // MASKCOREF_REPORT_H_
