#pragma once

#include <string>
#include <vector>

#include "ratnet/types.hpp"

namespace ratnet::aaa {

// Barycentric rational r(x) = sum_j w_j f_j/(x-z_j) / sum_j w_j/(x-z_j).
// Interpolates f_j at every support point; m supports represent a rational
// of degree (m-1, m-1).
struct BarycentricRational {
  std::vector<double> support;
  std::vector<double> values;
  std::vector<double> weights;

  std::size_t size() const { return support.size(); }
  std::size_t degree() const { return support.empty() ? 0 : support.size() - 1; }
  void validate() const;

  std::string to_json() const;
  static BarycentricRational from_json(const std::string& text);
};

// Evaluation with the removable-singularity convention: x within 1e-14 of a
// support point returns the stored value. A vanishing denominator sum away
// from the supports raises PoleError.
double bary_eval(const BarycentricRational& r, double x);

struct AaaResult {
  BarycentricRational approx;
  FitReport report;  // history holds the max residual after each support
};

// Greedy AAA: repeatedly add the point of maximum residual to the support
// set and recompute weights as the minimal right singular vector of the
// Loewner matrix over the remaining points. Stops at m_max supports or when
// the residual drops below rel_tol * max|f|.
AaaResult aaa_fit(const SampleSet& samples, int m_max, double rel_tol = 1e-13);

double mse(const BarycentricRational& r, const SampleSet& samples);

}  // namespace ratnet::aaa
