#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "ratnet/types.hpp"

namespace ratnet::basis {

// Ordered set of d-dimensional multi-indices in graded lexicographic order:
// ascending total degree, ties broken lexicographically. The ordering is
// fixed so coefficient vectors are reproducible across runs.
struct BasisIndexSet {
  std::size_t dim = 1;
  std::vector<int> indices;  // count() * dim, row-major

  std::size_t count() const { return dim == 0 ? 0 : indices.size() / dim; }
  std::span<const int> at(std::size_t j) const {
    return {indices.data() + j * dim, dim};
  }
  int max_degree(std::size_t axis) const;
};

// TensorProduct: all alpha with alpha_i <= degree_i.
// TotalDegree:   all alpha with sum(alpha) <= max(degree).
BasisIndexSet index_set(std::span<const int> degree, Scheme scheme);

// Affine map of raw points (row-major, n*dim) onto [-1,1]^d. Throws
// DomainError naming the offending coordinate when a point falls outside
// the box by more than `slack`.
std::vector<double> normalize_to_unit_box(std::span<const double> points,
                                          std::size_t dim, const Box& box,
                                          double slack = 1e-12);

// First-kind Chebyshev values T_0..T_n at x, by the three-term recurrence.
void chebyshev_values(double x, int max_degree, std::span<double> out);

// Entry j is prod_i T_{alpha_i}(x_i) for the j-th multi-index. The point
// must be normalized; coordinates outside [-1,1] beyond 1e-9 are rejected.
std::vector<double> eval_basis(std::span<const double> point,
                               const BasisIndexSet& idx);
void eval_basis_into(std::span<const double> point, const BasisIndexSet& idx,
                     std::span<double> out);

// Rows = normalized points, cols = basis terms.
Eigen::MatrixXd basis_matrix(std::span<const double> points, std::size_t dim,
                             const BasisIndexSet& idx);

// Rational function p/q over a declared Chebyshev basis on a box. The
// box-to-[-1,1]^d map is part of the value: eval takes raw-domain points.
struct RationalApprox {
  DegreeSpec spec;
  Box box;
  BasisIndexSet idx_num;
  BasisIndexSet idx_den;
  std::vector<double> num_coeffs;
  std::vector<double> den_coeffs;

  static RationalApprox make(DegreeSpec spec, Box box);

  double eval(std::span<const double> raw_point) const;
  double eval(double x) const;  // univariate convenience
  // Same but for points already mapped onto [-1,1]^d.
  double eval_normalized(std::span<const double> unit_point) const;

  std::string to_json() const;
  static RationalApprox from_json(const std::string& text);
};

double eval_rational(const RationalApprox& r, std::span<const double> raw_point);

}  // namespace ratnet::basis
