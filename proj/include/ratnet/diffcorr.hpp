#pragma once

#include "ratnet/basis.hpp"
#include "ratnet/types.hpp"

namespace ratnet::diffcorr {

struct Options {
  int max_iters = 100;
  double tol = 1e-10;  // stop when the per-iteration error improvement drops below this
};

struct FitResult {
  basis::RationalApprox approx;
  FitReport report;
};

// Best uniform rational approximation on a discrete sample set by
// differential correction: each iterate solves one LP
//   minimize u  s.t.  |f_i q(x_i) - p(x_i)| - delta_k q(x_i) <= u q_k(x_i)
// with coefficients normalized by |(a,b)|_inf <= 1, starting from
// p = 0, q = 1. Returns the iterate with the smallest recomputed error.
FitResult fit(const SampleSet& samples, const DegreeSpec& spec,
              const Options& opts = {});

// max_i |f_i - r(x_i)| over the sample set.
double uniform_error(const basis::RationalApprox& r, const SampleSet& samples);

// Best rational approximation to max(0,x) on a uniform grid; the fixed
// activation used by the nn module.
basis::RationalApprox fit_relu_rational(const DegreeSpec& degrees,
                                        const Box& interval, int n_points);
basis::RationalApprox fit_relu_rational();  // degree (3,2) on [-1,1], 2001 points

}  // namespace ratnet::diffcorr
