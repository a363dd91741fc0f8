#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ratnet {

// Axis-aligned domain box. All approximation happens on the image of this
// box under the per-coordinate affine map onto [-1,1]^d.
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t dim() const { return lower.size(); }
  bool contains(std::span<const double> pt, double slack = 1e-12) const;
  void validate() const;
};

Box unit_box(std::size_t dim);

enum class Scheme { TensorProduct, TotalDegree };

// Per-dimension numerator/denominator degrees plus the basis scheme.
struct DegreeSpec {
  std::vector<int> num_degree;
  std::vector<int> den_degree;
  Scheme scheme = Scheme::TotalDegree;

  std::size_t dim() const { return num_degree.size(); }
  void validate() const;
};

DegreeSpec univariate_degrees(int num, int den);

// Finite list of (point, value) pairs on a box. Points are stored row-major
// in raw (unnormalized) coordinates.
struct SampleSet {
  std::size_t dim = 1;
  std::vector<double> points;  // size() * dim
  std::vector<double> values;
  Box box;

  std::size_t size() const { return values.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points.data() + i * dim, dim};
  }
  // Checks shape consistency, finiteness, distinct points, containment and
  // that at least `min_samples` samples are present.
  void validate(std::size_t min_samples = 1) const;
};

struct FitReport {
  double error = 0.0;           // uniform norm on the training set
  int iterations = 0;
  double wall_time = 0.0;       // seconds
  std::vector<double> history;  // per-iteration error
  bool converged = true;
  bool pole_flag = false;
};

class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PoleError : public std::runtime_error {
 public:
  PoleError(const std::string& msg, std::vector<double> where)
      : std::runtime_error(msg), point(std::move(where)) {}
  std::vector<double> point;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, long line_no)
      : std::runtime_error(msg + " (line " + std::to_string(line_no) + ")"),
        line(line_no) {}
  long line;
};

}  // namespace ratnet
