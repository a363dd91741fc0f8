#include "ratnet/diffcorr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ratnet/data.hpp"
#include "ratnet/lp.hpp"

namespace ratnet::diffcorr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

FitResult fit(const SampleSet& samples, const DegreeSpec& spec,
              const Options& opts) {
  const auto t0 = Clock::now();
  spec.validate();
  if (spec.dim() != samples.dim)
    throw DomainError("diffcorr: degree/sample dimension mismatch");
  if (opts.max_iters < 1) throw DomainError("diffcorr: max_iters must be >= 1");

  auto r = basis::RationalApprox::make(spec, samples.box);
  const std::size_t n_a = r.idx_num.count();
  const std::size_t n_b = r.idx_den.count();
  samples.validate(n_a + n_b);
  const std::size_t n = samples.size();

  FitResult out{std::move(r), {}};
  const auto [fmin_it, fmax_it] =
      std::minmax_element(samples.values.begin(), samples.values.end());
  const double fmin = *fmin_it, fmax = *fmax_it;

  // Constant targets collapse to the exact degree-(0,0) answer.
  if (fmin == fmax) {
    out.approx.num_coeffs[0] = fmin;
    out.approx.den_coeffs[0] = 1.0;
    out.report.error = 0.0;
    out.report.history = {0.0};
    out.report.iterations = 0;
    out.report.wall_time = seconds_since(t0);
    return out;
  }

  const auto unit =
      basis::normalize_to_unit_box(samples.points, samples.dim, samples.box);
  const Eigen::MatrixXd phi_num =
      basis::basis_matrix(unit, samples.dim, out.approx.idx_num);
  const Eigen::MatrixXd phi_den =
      basis::basis_matrix(unit, samples.dim, out.approx.idx_den);
  Eigen::Map<const Eigen::VectorXd> f(samples.values.data(), n);

  Eigen::VectorXd a = Eigen::VectorXd::Zero(n_a);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n_b);
  b[0] = 1.0;
  Eigen::VectorXd qvals = phi_den * b;
  double delta = f.cwiseAbs().maxCoeff();

  Eigen::VectorXd best_a = a, best_b = b;
  double best_err = delta;
  int iters = 0;
  bool converged = false;  // stall or iteration cap leave this unset

  const std::size_t n_var = n_a + n_b + 1;
  lp::Problem p = lp::make_problem(2 * n, n_var);
  p.c[n_var - 1] = 1.0;
  for (std::size_t j = 0; j < n_a + n_b; ++j) {
    p.lo[j] = -1.0;
    p.hi[j] = 1.0;
  }
  p.A.block(0, 0, n, n_a) = -phi_num;
  p.A.block(n, 0, n, n_a) = phi_num;

  while (iters < opts.max_iters) {
    ++iters;
    // Rows depending on the current iterate (delta_k and q_k).
    p.A.block(0, n_a, n, n_b) =
        (f.array() - delta).matrix().asDiagonal() * phi_den;
    p.A.block(n, n_a, n, n_b) =
        (-(f.array() + delta)).matrix().asDiagonal() * phi_den;
    p.A.col(n_var - 1).head(n) = -qvals;
    p.A.col(n_var - 1).tail(n) = -qvals;

    lp::Solution sol = lp::solve(p);
    if (sol.status != lp::Status::Optimal)
      throw NumericalError(
          "diffcorr: auxiliary LP not optimal (invariant violation)");
    if (sol.objective >= 0.0) {
      converged = true;  // optimality certificate for the current iterate
      break;
    }

    Eigen::VectorXd na = sol.y.head(n_a);
    Eigen::VectorXd nb = sol.y.segment(n_a, n_b);
    // Rescale so the coefficient box stays active; p/q is unchanged.
    const double scale =
        std::max(na.cwiseAbs().maxCoeff(), nb.cwiseAbs().maxCoeff());
    if (scale > 0.0) {
      na /= scale;
      nb /= scale;
    }
    const Eigen::VectorXd nq = phi_den * nb;
    if (nq.minCoeff() <= 0.0) {
      Eigen::Index where;
      nq.minCoeff(&where);
      throw NumericalError(
          "diffcorr: degenerate fit, denominator nonpositive at sample " +
          std::to_string(where));
    }
    const double err =
        ((phi_num * na).cwiseQuotient(nq) - f).cwiseAbs().maxCoeff();

    if (err >= delta) break;  // numerical stall; keep the previous iterate

    a = na;
    b = nb;
    qvals = nq;
    out.report.history.push_back(err);
    if (err < best_err) {
      best_err = err;
      best_a = a;
      best_b = b;
    }
    const double improvement = delta - err;
    delta = err;
    if (improvement < opts.tol) {
      converged = true;
      break;
    }
  }

  std::copy(best_a.begin(), best_a.end(), out.approx.num_coeffs.begin());
  std::copy(best_b.begin(), best_b.end(), out.approx.den_coeffs.begin());
  out.report.converged = converged;
  out.report.iterations = iters;
  out.report.error = uniform_error(out.approx, samples);
  out.report.wall_time = seconds_since(t0);
  return out;
}

double uniform_error(const basis::RationalApprox& r, const SampleSet& samples) {
  samples.validate(1);
  double m = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i)
    m = std::max(m, std::abs(samples.values[i] - r.eval(samples.point(i))));
  return m;
}

basis::RationalApprox fit_relu_rational(const DegreeSpec& degrees,
                                        const Box& interval, int n_points) {
  if (interval.dim() != 1)
    throw DomainError("relu fit: interval must be univariate");
  const int n[] = {n_points};
  const auto samples = data::sample_function("relu", interval, n);
  return fit(samples, degrees, {}).approx;
}

basis::RationalApprox fit_relu_rational() {
  return fit_relu_rational(univariate_degrees(3, 2), unit_box(1), 2001);
}

}  // namespace ratnet::diffcorr
