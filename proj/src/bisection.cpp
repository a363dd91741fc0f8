#include "ratnet/bisection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "ratnet/diffcorr.hpp"
#include "ratnet/lp.hpp"

namespace ratnet::bisection {

namespace {

using Clock = std::chrono::steady_clock;

struct Assembled {
  basis::RationalApprox proto;
  Eigen::MatrixXd phi_num;
  Eigen::MatrixXd phi_den;
  Eigen::VectorXd f;
  std::size_t n_a = 0, n_b = 0, n = 0;
};

Assembled assemble(const SampleSet& samples, const DegreeSpec& spec) {
  spec.validate();
  if (spec.dim() != samples.dim)
    throw DomainError("bisection: degree/sample dimension mismatch");
  Assembled as{basis::RationalApprox::make(spec, samples.box), {}, {}, {}};
  as.n_a = as.proto.idx_num.count();
  as.n_b = as.proto.idx_den.count();
  samples.validate(as.n_a + as.n_b);
  as.n = samples.size();
  const auto unit =
      basis::normalize_to_unit_box(samples.points, samples.dim, samples.box);
  as.phi_num = basis::basis_matrix(unit, samples.dim, as.proto.idx_num);
  as.phi_den = basis::basis_matrix(unit, samples.dim, as.proto.idx_den);
  as.f = Eigen::Map<const Eigen::VectorXd>(samples.values.data(), as.n);
  return as;
}

// Rows: (f_i - z) q - p <= 0;  p - (f_i + z) q <= 0;  -q + t <= -delta;
// optionally q <= U. Variables (a, b, t) with t in [0,1] and the
// coefficients normalized into a data-scaled box, the same normalization
// the differential-correction subproblem uses. The box keeps the polytope
// compact so the simplex cannot wander a free optimal face at large z.
lp::Problem feasibility_lp(const Assembled& as, double z,
                           const BisectOptions& opts) {
  const std::size_t n = as.n, n_a = as.n_a, n_b = as.n_b;
  const bool bounded = opts.den_upper.has_value();
  const std::size_t rows = bounded ? 4 * n : 3 * n;
  const std::size_t n_var = n_a + n_b + 1;

  lp::Problem p = lp::make_problem(rows, n_var);
  p.c[n_var - 1] = -1.0;  // maximize the denominator slack t
  p.lo[n_var - 1] = 0.0;
  p.hi[n_var - 1] = 1.0;
  const double coeff_box = std::max(1.0, 2.0 * as.f.cwiseAbs().maxCoeff());
  for (std::size_t j = 0; j + 1 < n_var; ++j) {
    p.lo[j] = -coeff_box;
    p.hi[j] = coeff_box;
  }

  p.A.block(0, 0, n, n_a) = -as.phi_num;
  p.A.block(0, n_a, n, n_b) =
      (as.f.array() - z).matrix().asDiagonal() * as.phi_den;
  p.A.block(n, 0, n, n_a) = as.phi_num;
  p.A.block(n, n_a, n, n_b) =
      (-(as.f.array() + z)).matrix().asDiagonal() * as.phi_den;
  p.A.block(2 * n, n_a, n, n_b) = -as.phi_den;
  p.A.col(n_var - 1).segment(2 * n, n).setOnes();
  p.b.segment(2 * n, n).setConstant(-opts.den_lower);
  if (bounded) {
    p.A.block(3 * n, n_a, n, n_b) = as.phi_den;
    p.b.tail(n).setConstant(*opts.den_upper);
  }
  return p;
}

Feasibility feasible_assembled(const Assembled& as, double z,
                               const BisectOptions& opts) {
  if (z < 0.0) throw DomainError("bisection: z must be >= 0");
  const lp::Problem p = feasibility_lp(as, z, opts);
  lp::Solution sol;
  try {
    sol = lp::solve(p);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string(e.what()) + " (feasibility test at z=" +
                         std::to_string(z) + ")");
  }
  Feasibility out;
  if (sol.status == lp::Status::Optimal) {
    out.feasible = true;
    basis::RationalApprox w = as.proto;
    std::copy(sol.y.begin(), sol.y.begin() + as.n_a, w.num_coeffs.begin());
    std::copy(sol.y.begin() + as.n_a, sol.y.begin() + as.n_a + as.n_b,
              w.den_coeffs.begin());
    out.witness = std::move(w);
  }
  return out;
}

}  // namespace

void BisectOptions::validate() const {
  if (z_lo < 0.0) throw DomainError("bisection: z_lo must be >= 0");
  if (z_hi && !(*z_hi > z_lo))
    throw DomainError("bisection: need z_lo < z_hi");
  if (z_tol <= 0.0) throw DomainError("bisection: z_tol must be positive");
  if (den_lower <= 0.0)
    throw DomainError("bisection: den_lower must be positive");
  if (den_upper && !(den_lower < *den_upper))
    throw DomainError("bisection: need den_lower < den_upper");
  if (max_outer < 1) throw DomainError("bisection: max_outer must be >= 1");
}

Feasibility feasible(const SampleSet& samples, const DegreeSpec& spec,
                     double z, const BisectOptions& opts) {
  opts.validate();
  return feasible_assembled(assemble(samples, spec), z, opts);
}

BisectResult bisect_fit(const SampleSet& samples, const DegreeSpec& spec,
                        const BisectOptions& opts) {
  const auto t0 = Clock::now();
  opts.validate();
  Assembled as = assemble(samples, spec);

  BisectResult out{as.proto, {}, {}};
  const double fmax = as.f.maxCoeff(), fmin = as.f.minCoeff();

  if (fmax == fmin) {
    out.approx.num_coeffs[0] = fmax;
    out.approx.den_coeffs[0] = 1.0;
    out.report.error = 0.0;
    out.report.wall_time =
        std::chrono::duration<double>(Clock::now() - t0).count();
    return out;
  }

  double z_lo = opts.z_lo;
  double z_hi = opts.z_hi.value_or(fmax - fmin);
  if (!(z_lo < z_hi))
    throw DomainError("bisection: invalid bracket [" + std::to_string(z_lo) +
                      ", " + std::to_string(z_hi) + ")");

  int lps = 0;
  auto check = feasible_assembled(as, z_hi, opts);
  ++lps;
  if (!check.feasible)
    throw DomainError("bisection: initial z_hi=" + std::to_string(z_hi) +
                      " is infeasible; the bracket is invalid");
  basis::RationalApprox witness = std::move(*check.witness);
  out.trace.push_back({0, z_lo, z_hi, true});

  int iter = 0;
  while (z_hi - z_lo > opts.z_tol && iter < opts.max_outer) {
    ++iter;
    const double mid = 0.5 * (z_lo + z_hi);
    auto res = feasible_assembled(as, mid, opts);
    ++lps;
    if (res.feasible) {
      z_hi = mid;
      witness = std::move(*res.witness);
    } else {
      z_lo = mid;
    }
    out.trace.push_back({iter, z_lo, z_hi, res.feasible});
    out.report.history.push_back(z_hi);
  }

  out.approx = std::move(witness);
  out.report.converged = (z_hi - z_lo <= opts.z_tol);
  out.report.iterations = lps;
  out.report.error = diffcorr::uniform_error(out.approx, samples);
  out.report.wall_time =
      std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

double condition_estimate(const SampleSet& samples, const DegreeSpec& spec,
                          double z, const BisectOptions& opts) {
  opts.validate();
  if (z < 0.0) throw DomainError("bisection: z must be >= 0");
  const Assembled as = assemble(samples, spec);

  // Column norms over the 2n error rows, coefficient columns only.
  const std::size_t n_coef = as.n_a + as.n_b;
  Eigen::VectorXd norm2 = Eigen::VectorXd::Zero(n_coef);
  for (std::size_t j = 0; j < as.n_a; ++j)
    norm2[j] = 2.0 * as.phi_num.col(j).squaredNorm();
  const Eigen::ArrayXd wlo = (as.f.array() - z).square();
  const Eigen::ArrayXd whi = (as.f.array() + z).square();
  for (std::size_t j = 0; j < as.n_b; ++j) {
    const Eigen::ArrayXd col = as.phi_den.col(j).array().square();
    norm2[as.n_a + j] = (col * (wlo + whi)).sum();
  }
  const double hi = std::sqrt(norm2.maxCoeff());
  const double lo = std::sqrt(norm2.minCoeff());
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace ratnet::bisection
