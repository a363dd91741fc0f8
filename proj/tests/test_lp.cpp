#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "doctest.h"
#include "ratnet/lp.hpp"

using namespace ratnet;
using lp::Problem;
using lp::Status;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Brute-force oracle: enumerate all candidate vertices (every n-subset of
// the row set, bounds folded in as rows), keep the feasible ones, take the
// best objective. Only for tiny instances.
std::optional<double> enumerate_optimum(const Problem& p) {
  const Eigen::Index n = p.c.size();
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> rhs;
  for (Eigen::Index i = 0; i < p.A.rows(); ++i) {
    rows.push_back(p.A.row(i).transpose());
    rhs.push_back(p.b[i]);
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isfinite(p.hi[j])) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[j] = 1.0;
      rows.push_back(e);
      rhs.push_back(p.hi[j]);
    }
    if (std::isfinite(p.lo[j])) {
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      e[j] = -1.0;
      rows.push_back(e);
      rhs.push_back(-p.lo[j]);
    }
  }
  const std::size_t m = rows.size();
  std::optional<double> best;
  std::vector<std::size_t> pick(n);
  // Iterate over all n-combinations of m rows.
  std::vector<std::size_t> idx(n);
  for (Eigen::Index i = 0; i < n; ++i) idx[i] = i;
  auto advance = [&]() -> bool {
    Eigen::Index k = n - 1;
    while (k >= 0 && idx[k] == m - n + k) --k;
    if (k < 0) return false;
    ++idx[k];
    for (Eigen::Index j = k + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    return true;
  };
  if (m < static_cast<std::size_t>(n)) return best;
  do {
    Eigen::MatrixXd B(n, n);
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      B.row(i) = rows[idx[i]].transpose();
      r[i] = rhs[idx[i]];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    if (!lu.isInvertible()) continue;
    const Eigen::VectorXd y = lu.solve(r);
    bool feasible = true;
    for (std::size_t i = 0; i < m && feasible; ++i)
      if (rows[i].dot(y) > rhs[i] + 1e-7) feasible = false;
    if (!feasible) continue;
    const double obj = p.c.dot(y);
    if (!best || obj < *best) best = obj;
  } while (advance());
  return best;
}

}  // namespace

TEST_CASE("maximize x up to 3") {
  Problem p = lp::make_problem(1, 1);
  p.c[0] = -1.0;
  p.A(0, 0) = 1.0;
  p.b[0] = 3.0;
  p.lo[0] = 0.0;
  auto s = lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.y[0] == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(s.objective == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("infeasible: x <= -1 and x >= 0") {
  Problem p = lp::make_problem(1, 1);
  p.c[0] = 1.0;
  p.A(0, 0) = 1.0;
  p.b[0] = -1.0;
  p.lo[0] = 0.0;
  CHECK(lp::solve(p).status == Status::Infeasible);
}

TEST_CASE("unbounded: minimize -x with x >= 0") {
  Problem p = lp::make_problem(0, 1);
  p.c[0] = -1.0;
  p.lo[0] = 0.0;
  CHECK(lp::solve(p).status == Status::Unbounded);
}

TEST_CASE("two variables, equality-like corner") {
  // min -x - y s.t. x + y <= 1, x,y in [0,1]: optimum at any point of the
  // facet x+y=1 with objective -1.
  Problem p = lp::make_problem(1, 2);
  p.c << -1.0, -1.0;
  p.A << 1.0, 1.0;
  p.b[0] = 1.0;
  p.lo.setZero();
  p.hi.setOnes();
  auto s = lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  CHECK(s.objective == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(s.y.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("random LPs match the vertex-enumeration oracle") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> gauss(0.0, 1.0);
  int solved = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 4);  // 2..5 variables
    const int m = 4 + static_cast<int>(rng() % 5);  // 4..8 rows
    Problem p = lp::make_problem(m, n);
    for (int j = 0; j < n; ++j) p.c[j] = gauss(rng);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) p.A(i, j) = gauss(rng);
      p.b[i] = 1.0 + std::abs(gauss(rng));  // interior point at the origin
    }
    for (int j = 0; j < n; ++j) {
      p.lo[j] = -2.0;
      p.hi[j] = 2.0;
    }
    const auto oracle = enumerate_optimum(p);
    auto s = lp::solve(p);
    REQUIRE(s.status == Status::Optimal);
    REQUIRE(oracle.has_value());
    CHECK(s.objective == doctest::Approx(*oracle).epsilon(1e-7));
    // Feasibility of the returned point.
    CHECK((p.A * s.y - p.b).maxCoeff() <= 1e-7);
    for (int j = 0; j < n; ++j) {
      CHECK(s.y[j] >= p.lo[j] - 1e-9);
      CHECK(s.y[j] <= p.hi[j] + 1e-9);
    }
    ++solved;
  }
  CHECK(solved == 60);
}

TEST_CASE("determinism: identical input, identical output") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Problem p = lp::make_problem(12, 4);
  for (int j = 0; j < 4; ++j) p.c[j] = gauss(rng);
  for (int i = 0; i < 12; ++i) {
    for (int j = 0; j < 4; ++j) p.A(i, j) = gauss(rng);
    p.b[i] = 1.0 + std::abs(gauss(rng));
  }
  p.lo.setConstant(-3.0);
  p.hi.setConstant(3.0);
  auto s1 = lp::solve(p);
  auto s2 = lp::solve(p);
  REQUIRE(s1.status == Status::Optimal);
  REQUIRE(s2.status == Status::Optimal);
  CHECK(s1.objective == s2.objective);
  for (int j = 0; j < 4; ++j) CHECK(s1.y[j] == s2.y[j]);
  CHECK(s1.iterations == s2.iterations);
}

TEST_CASE("scaling the objective leaves the argmin unchanged") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Problem p = lp::make_problem(10, 3);
  for (int j = 0; j < 3; ++j) p.c[j] = gauss(rng);
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 3; ++j) p.A(i, j) = gauss(rng);
    p.b[i] = 0.5 + std::abs(gauss(rng));
  }
  p.lo.setConstant(-4.0);
  p.hi.setConstant(4.0);
  const auto base = lp::solve(p);
  REQUIRE(base.status == Status::Optimal);

  // Power-of-two scaling is exact arithmetic: bit-identical argmin.
  Problem p2 = p;
  p2.c *= 2.0;
  auto s2 = lp::solve(p2);
  REQUIRE(s2.status == Status::Optimal);
  for (int j = 0; j < 3; ++j) CHECK(s2.y[j] == base.y[j]);

  Problem p3 = p;
  p3.c *= 3.7;
  auto s3 = lp::solve(p3);
  REQUIRE(s3.status == Status::Optimal);
  for (int j = 0; j < 3; ++j)
    CHECK(s3.y[j] == doctest::Approx(base.y[j]).epsilon(1e-9));
}

TEST_CASE("weak-duality spot check: no small feasible improvement") {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Problem p = lp::make_problem(8, 3);
  for (int j = 0; j < 3; ++j) p.c[j] = gauss(rng);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 3; ++j) p.A(i, j) = gauss(rng);
    p.b[i] = 1.0 + std::abs(gauss(rng));
  }
  p.lo.setConstant(-2.0);
  p.hi.setConstant(2.0);
  auto s = lp::solve(p);
  REQUIRE(s.status == Status::Optimal);
  for (int j = 0; j < 3; ++j) {
    Eigen::VectorXd y = s.y;
    y[j] -= 1e-6 * (p.c[j] > 0 ? 1.0 : -1.0);  // step along -c
    const bool feasible = (p.A * y - p.b).maxCoeff() <= 0.0 &&
                          (y.array() >= p.lo.array()).all() &&
                          (y.array() <= p.hi.array()).all();
    const double gain = s.objective - p.c.dot(y);
    if (feasible) CHECK(gain <= 1e-5);
  }
}

TEST_CASE("iteration cap raises a stall error distinct from infeasible") {
  Problem p = lp::make_problem(4, 2);
  p.c << -1.0, -1.0;
  p.A << 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0, 2.0;
  p.b << 1.0, 1.0, 1.5, 2.0;
  p.lo.setZero();
  lp::Options opts;
  opts.max_iters = 1;
  CHECK_THROWS_AS(lp::solve(p, opts), NumericalError);
}

TEST_CASE("dimension mismatch is a structural error") {
  Problem p = lp::make_problem(2, 2);
  p.b.resize(1);
  CHECK_THROWS_AS(lp::solve(p), DomainError);
}

TEST_CASE("dump writes a fixed-format listing") {
  Problem p = lp::make_problem(1, 2);
  p.c << 1.0, -0.5;
  p.A << 0.25, 1.0;
  p.b[0] = 2.0;
  p.lo[0] = 0.0;
  std::ostringstream os;
  lp::dump(p, os);
  const std::string text = os.str();
  CHECK(text.find("lp rows=1 cols=2") != std::string::npos);
  CHECK(text.find("row 0: 0.25 1 <= 2") != std::string::npos);
  CHECK(text.find("end") != std::string::npos);
}
