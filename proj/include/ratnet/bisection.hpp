#pragma once

#include <optional>
#include <vector>

#include "ratnet/basis.hpp"
#include "ratnet/types.hpp"

namespace ratnet::bisection {

struct BisectOptions {
  double z_lo = 0.0;
  std::optional<double> z_hi;       // default: range of f (always feasible)
  double z_tol = 1e-6;              // bracket width stop
  double den_lower = 1e-2;          // delta, q(x_i) >= delta on every sample
  std::optional<double> den_upper;  // U, the conditioning bound q(x_i) <= U
  int max_outer = 60;

  void validate() const;
};

struct TraceRow {
  int iteration = 0;
  double z_lo = 0.0;
  double z_hi = 0.0;
  bool feasible = false;
};

struct Feasibility {
  bool feasible = false;
  std::optional<basis::RationalApprox> witness;
};

// One LP: do coefficients (a,b) exist with |f_i q - p| <= z q and
// delta <= q(x_i) (<= U when set) on every sample? The objective maximizes
// the minimum denominator slack so a feasible answer comes with a
// numerically robust witness.
Feasibility feasible(const SampleSet& samples, const DegreeSpec& spec,
                     double z, const BisectOptions& opts = {});

struct BisectResult {
  basis::RationalApprox approx;
  FitReport report;
  std::vector<TraceRow> trace;
};

// Bisection on the error level z; each step is a feasibility LP. The
// returned approximant is the witness of the last feasible level.
BisectResult bisect_fit(const SampleSet& samples, const DegreeSpec& spec,
                        const BisectOptions& opts = {});

// Conditioning proxy: ratio of largest to smallest column norm over the
// coefficient block of the feasibility-LP error rows. The denominator-bound
// rows are excluded, so setting den_upper leaves the proxy unchanged.
double condition_estimate(const SampleSet& samples, const DegreeSpec& spec,
                          double z, const BisectOptions& opts = {});

}  // namespace ratnet::bisection
