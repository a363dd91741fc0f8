#include "ratnet/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ratnet {

bool Box::contains(std::span<const double> pt, double slack) const {
  if (pt.size() != dim()) return false;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (pt[i] < lower[i] - slack || pt[i] > upper[i] + slack) return false;
  }
  return true;
}

void Box::validate() const {
  if (lower.empty() || lower.size() != upper.size())
    throw DomainError("box: bounds must be non-empty and of equal dimension");
  for (std::size_t i = 0; i < dim(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
      throw DomainError("box: bounds must be finite");
    if (!(lower[i] < upper[i]))
      throw DomainError("box: lower[" + std::to_string(i) +
                        "] must be strictly below upper[" + std::to_string(i) +
                        "]");
  }
}

Box unit_box(std::size_t dim) {
  Box b;
  b.lower.assign(dim, -1.0);
  b.upper.assign(dim, 1.0);
  return b;
}

void DegreeSpec::validate() const {
  if (num_degree.empty() || num_degree.size() != den_degree.size())
    throw DomainError(
        "degrees: numerator and denominator must share dimensionality >= 1");
  for (int d : num_degree)
    if (d < 0) throw DomainError("degrees: numerator degree must be >= 0");
  for (int d : den_degree)
    if (d < 0) throw DomainError("degrees: denominator degree must be >= 0");
}

DegreeSpec univariate_degrees(int num, int den) {
  DegreeSpec s;
  s.num_degree = {num};
  s.den_degree = {den};
  s.scheme = Scheme::TotalDegree;
  return s;
}

void SampleSet::validate(std::size_t min_samples) const {
  box.validate();
  if (dim == 0 || dim != box.dim())
    throw DomainError("samples: dimension mismatch with box");
  if (values.size() * dim != points.size())
    throw DomainError("samples: point/value count mismatch");
  if (values.size() < min_samples)
    throw DomainError("samples: need at least " + std::to_string(min_samples) +
                      " samples, got " + std::to_string(values.size()));
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("samples: values must be finite");
  for (double c : points)
    if (!std::isfinite(c)) throw DomainError("samples: points must be finite");
  for (std::size_t i = 0; i < size(); ++i)
    if (!box.contains(point(i)))
      throw DomainError("samples: point " + std::to_string(i) +
                        " lies outside the box");

  // Distinctness: sort an index permutation lexicographically and compare
  // neighbours.
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), 0);
  auto lex_less = [&](std::size_t a, std::size_t b) {
    return std::lexicographical_compare(
        points.begin() + a * dim, points.begin() + (a + 1) * dim,
        points.begin() + b * dim, points.begin() + (b + 1) * dim);
  };
  std::sort(order.begin(), order.end(), lex_less);
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (!lex_less(order[i - 1], order[i]) && !lex_less(order[i], order[i - 1]))
      throw DomainError("samples: duplicate point at index " +
                        std::to_string(order[i]));
  }
}

}  // namespace ratnet
