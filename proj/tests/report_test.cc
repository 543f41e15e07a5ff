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

#include <cmath>
#include <functional>

#include <gtest/gtest.h>

#include "maskcoref/error.h"

namespace maskcoref {
namespace {

ErrorCode CodeOf(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

TEST(QuantileTest, TypeSeven) {
  std::vector<double> v;
  for (int i = 1; i <= 100; ++i) v.push_back(i);
  const BoxStats box = ComputeBoxStats(v);
  EXPECT_NEAR(box.q1, 25.75, 1e-12);
  EXPECT_NEAR(box.median, 50.5, 1e-12);
  EXPECT_NEAR(box.q3, 75.25, 1e-12);
  EXPECT_EQ(box.lower_whisker, 1.0);
  EXPECT_EQ(box.upper_whisker, 100.0);
  EXPECT_TRUE(box.outliers.empty());
  EXPECT_EQ(Quantile7(v, 0.0), 1.0);
  EXPECT_EQ(Quantile7(v, 1.0), 100.0);
  EXPECT_EQ(CodeOf([] { Quantile7({}, 0.5); }), ErrorCode::kEmptyData);
}

TEST(QuantileTest, Outliers) {
  const std::vector<double> v = {1, 2, 3, 4, 5, 6, 7, 8, 9, 100};
  const BoxStats box = ComputeBoxStats(v);
  EXPECT_EQ(box.upper_whisker, 9.0);
  EXPECT_EQ(box.outliers, (std::vector<double>{100}));
}

TEST(TernaryTest, CornersAndCentroid) {
  const Point2 a = TernaryCoordinates(1, 0, 0);
  const Point2 b = TernaryCoordinates(0, 1, 0);
  const Point2 c = TernaryCoordinates(0, 0, 1);
  EXPECT_NEAR(a.x, 0.0, 1e-15);
  EXPECT_NEAR(a.y, 0.0, 1e-15);
  EXPECT_NEAR(b.x, 1.0, 1e-15);
  EXPECT_NEAR(b.y, 0.0, 1e-15);
  EXPECT_NEAR(c.x, 0.5, 1e-15);
  EXPECT_NEAR(c.y, std::sqrt(3.0) / 2.0, 1e-15);
  const Point2 g = TernaryCoordinates(1.0 / 3, 1.0 / 3, 1.0 / 3);
  EXPECT_NEAR(g.x, (a.x + b.x + c.x) / 3.0, 1e-12);
  EXPECT_NEAR(g.y, (a.y + b.y + c.y) / 3.0, 1e-12);
  EXPECT_EQ(CodeOf([] { TernaryCoordinates(-0.1, 0.6, 0.5); }),
            ErrorCode::kNegativeProbability);
  EXPECT_EQ(CodeOf([] { TernaryCoordinates(0, 0, 0); }), ErrorCode::kEmptyData);
}

TEST(SmootherTest, ReproducesLines) {
  std::vector<double> x, y;
  for (int i = 0; i < 30; ++i) {
    x.push_back(i * 0.5);
    y.push_back(3.0 - 2.0 * i * 0.5);
  }
  for (double at : {0.0, 3.3, 14.5}) {
    EXPECT_NEAR(LocalLinearAt(x, y, 0.3, at), 3.0 - 2.0 * at, 1e-9);
  }
  const std::vector<Point2> trend = SmoothTrend(x, y, 0.3, 100);
  ASSERT_EQ(trend.size(), 100u);
  EXPECT_NEAR(trend.front().x, 0.0, 1e-12);
  EXPECT_NEAR(trend.back().x, 14.5, 1e-12);
  const std::vector<double> few = {1, 2, 3};
  EXPECT_EQ(CodeOf([&] { SmoothTrend(few, few, 0.3); }), ErrorCode::kTooFewPoints);
}

TEST(TableTest, CsvAndColumns) {
  DataTable t;
  t.AddText("type", {"pronoun", "full_np"});
  t.AddNumeric("value", {0.5, 1.0 / 3.0});
  EXPECT_EQ(t.rows(), 2);
  EXPECT_TRUE(t.Has("value"));
  EXPECT_EQ(CodeOf([&] { t.Numeric("missing"); }), ErrorCode::kUnknownColumn);
  EXPECT_EQ(CodeOf([&] { t.Numeric("type"); }), ErrorCode::kUnknownColumn);
  const std::string csv = t.ToCsv({"hello"});
  EXPECT_EQ(csv.substr(0, 8), "# hello\n");
  EXPECT_NE(csv.find("type,value\n"), std::string::npos);
  EXPECT_NE(csv.find("pronoun,0.5\n"), std::string::npos);
  EXPECT_NE(csv.find("full_np,0.33333333333333331\n"), std::string::npos);
}

DataTable BoxTable() {
  DataTable t;
  std::vector<std::string> type;
  std::vector<double> v;
  for (int i = 0; i < 60; ++i) {
    type.push_back(i % 3 == 0 ? "pronoun" : i % 3 == 1 ? "proper_name" : "full_np");
    v.push_back(std::fmod(i * 7.3, 13.0) + (i == 59 ? 1000.0 : 0.0));
  }
  t.AddText("type", type);
  t.AddNumeric("surprisal", v);
  return t;
}

TEST(SvgTest, DeterministicAndComplete) {
  FigureSpec spec;
  spec.kind = FigureKind::kBox;
  spec.title = "Surprisal by type";
  spec.x_label = "type";
  spec.y_label = "bits";
  spec.category_column = "type";
  spec.value_column = "surprisal";
  spec.clip_quantile = 0.95;
  const DataTable t = BoxTable();
  const std::string svg = RenderSvg(spec, t);
  EXPECT_EQ(svg, RenderSvg(spec, t));
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("Surprisal by type"), std::string::npos);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_EQ(svg.find("1000"), std::string::npos);  // clipped away

  spec.value_column = "nope";
  EXPECT_EQ(CodeOf([&] { RenderSvg(spec, t); }), ErrorCode::kUnknownColumn);
}

TEST(SvgTest, AllKindsRender) {
  DataTable t;
  std::vector<double> a, b, c;
  std::vector<std::string> cat, group;
  for (int i = 0; i < 20; ++i) {
    a.push_back(0.05 * i);
    b.push_back(1.0 - 0.05 * i);
    c.push_back(0.0);
    cat.push_back(i % 2 ? "x" : "y");
    group.push_back(i % 4 < 2 ? "masked" : "unmasked");
  }
  t.AddNumeric("a", a);
  t.AddNumeric("b", b);
  t.AddNumeric("c", c);
  t.AddText("cat", cat);
  t.AddText("group", group);

  FigureSpec bars;
  bars.kind = FigureKind::kBars;
  bars.category_column = "cat";
  bars.value_column = "a";
  bars.group_column = "group";
  EXPECT_NE(RenderSvg(bars, t).find("<rect"), std::string::npos);

  FigureSpec scatter;
  scatter.kind = FigureKind::kScatterSmooth;
  scatter.x_column = "a";
  scatter.value_column = "b";
  EXPECT_NE(RenderSvg(scatter, t).find("<circle"), std::string::npos);

  FigureSpec ternary;
  ternary.kind = FigureKind::kTernary;
  ternary.ternary = {"a", "b", "c"};
  ternary.corner_labels = {"true", "other", "new"};
  const std::string svg = RenderSvg(ternary, t);
  EXPECT_NE(svg.find("other"), std::string::npos);
}

}  // namespace
}  // namespace maskcoref
