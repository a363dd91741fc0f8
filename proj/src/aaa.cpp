#include "ratnet/aaa.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace ratnet::aaa {

namespace {

constexpr double kSupportSnap = 1e-14;
constexpr double kInf = std::numeric_limits<double>::infinity();

double bary_den(const BarycentricRational& r, double x) {
  double d = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j)
    d += r.weights[j] / (x - r.support[j]);
  return d;
}

}  // namespace

void BarycentricRational::validate() const {
  if (support.empty() || support.size() != values.size() ||
      support.size() != weights.size())
    throw DomainError("barycentric: support/values/weights length mismatch");
  bool any_weight = false;
  for (double w : weights) {
    if (!std::isfinite(w)) throw DomainError("barycentric: weights must be finite");
    if (w != 0.0) any_weight = true;
  }
  if (!any_weight) throw DomainError("barycentric: all weights are zero");
  for (std::size_t i = 0; i < support.size(); ++i)
    for (std::size_t j = i + 1; j < support.size(); ++j)
      if (support[i] == support[j])
        throw DomainError("barycentric: duplicate support point");
}

double bary_eval(const BarycentricRational& r, double x) {
  double num = 0.0, den = 0.0, abs_den = 0.0;
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double dx = x - r.support[j];
    if (std::abs(dx) <= kSupportSnap) return r.values[j];
    const double t = r.weights[j] / dx;
    num += t * r.values[j];
    den += t;
    abs_den += std::abs(t);
  }
  if (std::abs(den) <= 1e-14 * abs_den)
    throw PoleError("barycentric: denominator sum vanished at x=" +
                        std::to_string(x),
                    {x});
  return num / den;
}

AaaResult aaa_fit(const SampleSet& samples, int m_max, double rel_tol) {
  const auto t0 = std::chrono::steady_clock::now();
  if (samples.dim != 1) throw DomainError("aaa: samples must be univariate");
  if (m_max < 1) throw DomainError("aaa: m_max must be >= 1");
  samples.validate(1);
  const std::size_t n = samples.size();
  if (2 * static_cast<std::size_t>(m_max) > n)
    throw DomainError("aaa: need at least 2*m_max samples");

  Eigen::Map<const Eigen::VectorXd> f(samples.values.data(), n);
  Eigen::Map<const Eigen::VectorXd> z(samples.points.data(), n);
  const double fscale = f.cwiseAbs().maxCoeff();

  AaaResult out;
  out.report.converged = false;
  auto& r = out.approx;
  std::vector<char> is_support(n, 0);

  // Current approximation at non-support points; the greedy loop starts
  // from the mean.
  Eigen::VectorXd approx = Eigen::VectorXd::Constant(n, f.mean());

  for (int m = 1; m <= m_max; ++m) {
    // Pick the worst point (lowest index on ties).
    double worst = -1.0;
    std::size_t pick = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_support[i]) continue;
      const double res = std::isfinite(approx[i])
                             ? std::abs(f[i] - approx[i])
                             : kInf;
      if (res > worst) {
        worst = res;
        pick = i;
      }
    }
    if (pick == n || worst == 0.0) {
      // Residual exactly zero everywhere: nothing left to improve.
      out.report.converged = true;
      break;
    }

    is_support[pick] = 1;
    r.support.push_back(z[pick]);
    r.values.push_back(f[pick]);

    // Loewner matrix over the remaining points.
    const std::size_t rows = n - static_cast<std::size_t>(m);
    Eigen::MatrixXd loewner(rows, m);
    std::size_t row = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_support[i]) continue;
      for (int j = 0; j < m; ++j)
        loewner(row, j) = (f[i] - r.values[j]) / (z[i] - r.support[j]);
      ++row;
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(loewner, Eigen::ComputeThinV);
    Eigen::VectorXd w = svd.matrixV().col(m - 1);
    if (!w.allFinite()) {
      const auto& sv = svd.singularValues();
      throw NumericalError(
          "aaa: singular vector failed (singular values " +
          std::to_string(sv(0)) + " .. " + std::to_string(sv(m - 1)) + ")");
    }
    // Deterministic sign: largest-magnitude component positive.
    Eigen::Index imax;
    w.cwiseAbs().maxCoeff(&imax);
    if (w[imax] < 0.0) w = -w;
    r.weights.assign(w.begin(), w.end());

    // Re-evaluate on the non-support points.
    double max_res = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_support[i]) continue;
      double num = 0.0, den = 0.0;
      for (int j = 0; j < m; ++j) {
        const double t = r.weights[j] / (z[i] - r.support[j]);
        num += t * r.values[j];
        den += t;
      }
      approx[i] = num / den;  // may overflow to inf near a pole
      const double res =
          std::isfinite(approx[i]) ? std::abs(f[i] - approx[i]) : kInf;
      max_res = std::max(max_res, res);
    }
    out.report.history.push_back(max_res);
    out.report.iterations = m;
    if (max_res <= rel_tol * fscale) {
      out.report.converged = true;
      break;
    }
  }

  // Uniform error over every sample, support-point convention included.
  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      const double v = bary_eval(r, z[i]);
      err = std::isfinite(v) ? std::max(err, std::abs(f[i] - v)) : kInf;
    } catch (const PoleError&) {
      out.report.pole_flag = true;
      err = kInf;
    }
  }
  out.report.error = err;

  // Poles inside the sampled interval show up as sign changes of the
  // barycentric denominator between neighbouring scan points.
  const double lo = samples.box.lower[0], hi = samples.box.upper[0];
  const int scan = static_cast<int>(4 * n);
  double prev = 0.0;
  bool have_prev = false;
  for (int i = 0; i <= scan; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / scan;
    bool at_support = false;
    for (double s : r.support)
      if (std::abs(x - s) <= 1e-12) at_support = true;
    if (at_support) {
      have_prev = false;
      continue;
    }
    const double d = bary_den(r, x);
    if (have_prev && ((d < 0.0) != (prev < 0.0))) out.report.pole_flag = true;
    prev = d;
    have_prev = true;
  }

  out.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return out;
}

double mse(const BarycentricRational& r, const SampleSet& samples) {
  if (samples.dim != 1) throw DomainError("aaa: samples must be univariate");
  samples.validate(1);
  double acc = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double d = samples.values[i] - bary_eval(r, samples.points[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(samples.size());
}

std::string BarycentricRational::to_json() const {
  nlohmann::json j;
  j["support"] = support;
  j["values"] = values;
  j["weights"] = weights;
  return j.dump(2);
}

BarycentricRational BarycentricRational::from_json(const std::string& text) {
  try {
    auto j = nlohmann::json::parse(text);
    BarycentricRational r;
    r.support = j.at("support").get<std::vector<double>>();
    r.values = j.at("values").get<std::vector<double>>();
    r.weights = j.at("weights").get<std::vector<double>>();
    r.validate();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("barycentric json: ") + e.what(), 0);
  }
}

}  // namespace ratnet::aaa
