#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "ratnet/data.hpp"

using namespace ratnet;
using data::GridDataset;

namespace {

std::filesystem::path tmp_file(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("ratnet_test_" + name);
  std::filesystem::remove(p);
  return p;
}

}  // namespace

TEST_CASE("builtin targets") {
  const double at_kink[] = {0.25};
  CHECK(data::eval_target(data::Target::SqrtAbsShift, at_kink) == 0.0);

  const double mid[] = {20.0, 0.0};
  CHECK(std::abs(data::eval_target(data::Target::KdvLike, mid)) < 1e-15);

  const double neg[] = {-0.5};
  CHECK(data::eval_target(data::Target::Relu, neg) == 0.0);

  CHECK_THROWS_AS(data::target_from_name("nope"), DomainError);
}

TEST_CASE("sample_function produces an inclusive uniform grid") {
  const int n[] = {5};
  auto s = data::sample_function("sqrt_abs_shift", data::default_box(data::Target::SqrtAbsShift), n);
  REQUIRE(s.size() == 5);
  CHECK(s.points.front() == -1.0);
  CHECK(s.points.back() == 1.0);
  CHECK(s.values[2] == doctest::Approx(std::sqrt(0.25)).epsilon(1e-15));

  // A sample outside the box is rejected by validation.
  SampleSet bad = s;
  bad.points[0] = 1.25;
  CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("kdv_like grid matches direct evaluation") {
  const int n[] = {16, 9};
  auto g = data::function_grid("kdv_like", data::default_box(data::Target::KdvLike), n);
  REQUIRE(g.count() == 16 * 9);
  auto s = data::to_sample_set(g);
  REQUIRE(s.size() == g.count());
  // Row-major: last axis fastest.
  CHECK(s.points[0] == 0.0);
  CHECK(s.points[1] == -20.0);
  CHECK(s.points[3] == g.axes[1][1]);
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(s.values[i] == data::eval_target(data::Target::KdvLike, s.point(i)));
}

TEST_CASE("grid save/load round-trips bit-exactly") {
  const int n[] = {7, 5};
  auto g = data::function_grid("kdv_like", data::default_box(data::Target::KdvLike), n);
  const auto path = tmp_file("roundtrip.grid");
  data::save_grid(g, path.string());
  auto back = data::load_grid(path.string());
  CHECK(back.axes == g.axes);
  CHECK(back.values == g.values);
  CHECK(back.box.lower == g.box.lower);
  std::filesystem::remove(path);
}

TEST_CASE("load_grid parses a toy file and reports shape errors") {
  const auto path = tmp_file("toy.grid");
  {
    std::ofstream out(path);
    out << "2\n0 1 2\n-1 1\n1 2 3 4 5 6\n";
  }
  auto g = data::load_grid(path.string());
  CHECK(g.dim() == 2);
  CHECK(g.axes[0].size() == 3);
  CHECK(g.axes[1].size() == 2);
  CHECK(g.values.size() == 6);
  CHECK(g.box.upper[0] == 2.0);

  {
    std::ofstream out(path);
    out << "2\n0 1 2\n-1 1\n1 2 3 4 5\n";  // five values, expected six
  }
  try {
    data::load_grid(path.string());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 4);
  }

  {
    std::ofstream out(path);
    out << "2\n0 1 2\n-1 1\n1 2 3 4 5 6 7\n";  // extra value
  }
  CHECK_THROWS_AS(data::load_grid(path.string()), ParseError);

  {
    std::ofstream out(path);
    out << "2\n0 1 bad\n-1 1\n1 2 3 4 5 6\n";
  }
  try {
    data::load_grid(path.string());
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
  std::filesystem::remove(path);
}

TEST_CASE("subsample keeps every k-th point and the box") {
  const int n[] = {512, 201};
  auto g = data::function_grid("kdv_like", data::default_box(data::Target::KdvLike), n);

  auto s1 = data::subsample_every_k(g, 1);
  CHECK(s1.values == g.values);

  auto s20 = data::subsample_every_k(g, 20);
  CHECK(s20.axes[0].size() == 26);  // ceil(512/20)
  auto s10 = data::subsample_every_k(g, 10);
  CHECK(s10.axes[1].size() == 21);  // ceil(201/10)
  CHECK(s10.box.upper[0] == g.box.upper[0]);

  // Composition on divisible strides.
  auto a = data::subsample_every_k(g, 10);
  auto ab = data::subsample_every_k(a, 2);
  auto direct = data::subsample_every_k(g, 20);
  CHECK(ab.axes == direct.axes);
  CHECK(ab.values == direct.values);

  CHECK_THROWS_AS(data::subsample_every_k(g, 600), DomainError);
  CHECK_THROWS_AS(data::subsample_every_k(g, 0), DomainError);
}

TEST_CASE("to_sample_set preserves ordering and values") {
  GridDataset g;
  g.axes = {{0.0, 1.0}, {10.0, 20.0}};
  g.values = {1.0, 2.0, 3.0, 4.0};
  g.box.lower = {0.0, 10.0};
  g.box.upper = {1.0, 20.0};
  auto s = data::to_sample_set(g);
  REQUIRE(s.size() == 4);
  CHECK(s.point(0)[0] == 0.0);
  CHECK(s.point(0)[1] == 10.0);
  CHECK(s.point(1)[0] == 0.0);
  CHECK(s.point(1)[1] == 20.0);
  CHECK(s.point(2)[0] == 1.0);
  CHECK(s.values == g.values);
}
