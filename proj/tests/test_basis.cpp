#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ratnet/basis.hpp"

using namespace ratnet;
using basis::BasisIndexSet;
using basis::RationalApprox;

namespace {

// Independent Chebyshev oracle: T_k(x) = cos(k arccos x).
double cheb_naive(int k, double x) { return std::cos(k * std::acos(x)); }

Box box1(double lo, double hi) {
  Box b;
  b.lower = {lo};
  b.upper = {hi};
  return b;
}

}  // namespace

TEST_CASE("normalize maps box corners and midpoints") {
  const std::vector<double> pts = {0.25};
  auto u = basis::normalize_to_unit_box(pts, 1, box1(-1.0, 1.0));
  CHECK(u[0] == doctest::Approx(0.25).epsilon(1e-15));

  const std::vector<double> mid = {20.0};
  u = basis::normalize_to_unit_box(mid, 1, box1(0.0, 40.0));
  CHECK(u[0] == doctest::Approx(0.0).epsilon(1e-15));

  Box b2;
  b2.lower = {0.0, -20.0};
  b2.upper = {40.0, 19.84375};
  const std::vector<double> corner = {40.0, 19.84375};
  u = basis::normalize_to_unit_box(corner, 2, b2);
  CHECK(u[0] == 1.0);
  CHECK(u[1] == 1.0);
}

TEST_CASE("normalize rejects points outside the box") {
  const std::vector<double> pts = {1.25};
  CHECK_THROWS_AS(basis::normalize_to_unit_box(pts, 1, box1(-1.0, 1.0)),
                  DomainError);
  // Slack admits roundoff-level violations.
  const std::vector<double> edge = {1.0 + 1e-13};
  auto u = basis::normalize_to_unit_box(edge, 1, box1(-1.0, 1.0));
  CHECK(u[0] == 1.0);
}

TEST_CASE("index_set counts: tensor and total degree") {
  const int d22[] = {2, 2};
  CHECK(basis::index_set(d22, Scheme::TensorProduct).count() == 9);

  // Total degree (20,20) in 2-D, counted by explicit enumeration.
  const int d20[] = {20, 20};
  std::size_t expected = 0;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j)
      if (i + j <= 20) ++expected;
  CHECK(expected == 231);
  CHECK(basis::index_set(d20, Scheme::TotalDegree).count() == expected);

  const int d3[] = {3};
  for (auto scheme : {Scheme::TensorProduct, Scheme::TotalDegree}) {
    auto idx = basis::index_set(d3, scheme);
    REQUIRE(idx.count() == 4);
    for (std::size_t j = 0; j < 4; ++j) CHECK(idx.at(j)[0] == static_cast<int>(j));
  }
}

TEST_CASE("index_set is order-stable, unique, graded") {
  const int deg[] = {4, 4};
  auto a = basis::index_set(deg, Scheme::TotalDegree);
  auto b = basis::index_set(deg, Scheme::TotalDegree);
  CHECK(a.indices == b.indices);

  int prev_total = -1;
  for (std::size_t j = 0; j < a.count(); ++j) {
    const int t = a.at(j)[0] + a.at(j)[1];
    CHECK(t >= prev_total);
    prev_total = t;
    for (std::size_t k = j + 1; k < a.count(); ++k) {
      const bool same = a.at(j)[0] == a.at(k)[0] && a.at(j)[1] == a.at(k)[1];
      CHECK_FALSE(same);
    }
  }
}

TEST_CASE("eval_basis examples") {
  const int deg[] = {2, 2};
  auto idx = basis::index_set(deg, Scheme::TensorProduct);
  const double ones[] = {1.0, 1.0};
  for (double v : basis::eval_basis(ones, idx)) CHECK(v == 1.0);

  const int d2[] = {2};
  auto idx1 = basis::index_set(d2, Scheme::TotalDegree);
  const double half[] = {0.5};
  auto vals = basis::eval_basis(half, idx1);
  CHECK(vals[0] == 1.0);
  CHECK(vals[1] == 0.5);
  CHECK(vals[2] == doctest::Approx(-0.5).epsilon(1e-15));

  BasisIndexSet only11;
  only11.dim = 2;
  only11.indices = {1, 1};
  const double zero[] = {0.0, 0.0};
  CHECK(basis::eval_basis(zero, only11)[0] == 0.0);

  const double outside[] = {1.1};
  CHECK_THROWS_AS(basis::eval_basis(outside, idx1), DomainError);
}

TEST_CASE("recurrence agrees with cos(k arccos x) up to degree 25") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> table(26);
  for (int trial = 0; trial < 1000; ++trial) {
    const double x = dist(rng);
    basis::chebyshev_values(x, 25, table);
    for (int k = 0; k <= 25; ++k)
      CHECK(std::abs(table[k] - cheb_naive(k, x)) <= 1e-12);
  }
}

TEST_CASE("basis_matrix shape and values") {
  const int d1[] = {1};
  auto idx = basis::index_set(d1, Scheme::TotalDegree);
  const std::vector<double> pts = {-1.0, 0.0, 1.0};
  auto m = basis::basis_matrix(pts, 1, idx);
  REQUIRE(m.rows() == 3);
  REQUIRE(m.cols() == 2);
  CHECK(m(0, 0) == 1.0);
  CHECK(m(0, 1) == -1.0);
  CHECK(m(1, 0) == 1.0);
  CHECK(m(1, 1) == 0.0);
  CHECK(m(2, 0) == 1.0);
  CHECK(m(2, 1) == 1.0);

  const int d4[] = {3, 4};
  auto idx4 = basis::index_set(d4, Scheme::TensorProduct);
  const std::vector<double> one = {0.3, -0.7};
  auto row = basis::basis_matrix(one, 2, idx4);
  CHECK(row.rows() == 1);
  CHECK(row.cols() == 20);
}

TEST_CASE("basis_matrix matches the naive product oracle on a random grid") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> pts(10 * 2);
  for (auto& p : pts) p = dist(rng);

  const int deg[] = {2, 2};
  auto idx = basis::index_set(deg, Scheme::TensorProduct);
  auto m = basis::basis_matrix(pts, 2, idx);
  for (int i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < idx.count(); ++j) {
      const double want = cheb_naive(idx.at(j)[0], pts[2 * i]) *
                          cheb_naive(idx.at(j)[1], pts[2 * i + 1]);
      CHECK(m(i, j) == doctest::Approx(want).epsilon(1e-12));
      CHECK(std::abs(m(i, j)) <= 1.0 + 1e-12);  // Chebyshev boundedness
    }
  }
}

TEST_CASE("eval_rational basics and poles") {
  auto r = RationalApprox::make(univariate_degrees(0, 0), box1(-1.0, 1.0));
  r.num_coeffs = {2.0};
  r.den_coeffs = {1.0};
  CHECK(r.eval(0.37) == 2.0);
  CHECK(r.eval(-1.0) == 2.0);

  // Exact representation of f(x) = x at degrees (1,0).
  auto lin = RationalApprox::make(univariate_degrees(1, 0), box1(-1.0, 1.0));
  lin.num_coeffs = {0.0, 1.0};
  lin.den_coeffs = {1.0};
  CHECK(lin.eval(0.3) == doctest::Approx(0.3).epsilon(1e-15));

  // q(x) = T1(x) vanishes at 0.
  auto pole = RationalApprox::make(univariate_degrees(0, 1), box1(-1.0, 1.0));
  pole.num_coeffs = {1.0};
  pole.den_coeffs = {0.0, 1.0};
  CHECK_THROWS_AS(pole.eval(0.0), PoleError);

  const double outside[] = {2.0};
  CHECK_THROWS_AS(lin.eval(std::span<const double>(outside, 1)), DomainError);
}

TEST_CASE("rational JSON round trip is exact") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  DegreeSpec spec;
  spec.num_degree = {3, 2};
  spec.den_degree = {2, 2};
  spec.scheme = Scheme::TotalDegree;
  Box b;
  b.lower = {0.0, -20.0};
  b.upper = {40.0, 19.84375};
  auto r = RationalApprox::make(spec, b);
  for (auto& c : r.num_coeffs) c = dist(rng);
  for (auto& c : r.den_coeffs) c = dist(rng);
  r.den_coeffs[0] += 2.0;

  auto back = RationalApprox::from_json(r.to_json());
  CHECK(back.num_coeffs == r.num_coeffs);
  CHECK(back.den_coeffs == r.den_coeffs);
  CHECK(back.box.lower == r.box.lower);
  CHECK(back.box.upper == r.box.upper);
  CHECK(back.spec.scheme == r.spec.scheme);

  const double pt[] = {12.3, 4.5};
  CHECK(back.eval(pt) == r.eval(pt));

  CHECK_THROWS_AS(RationalApprox::from_json("{not json"), ParseError);
}
