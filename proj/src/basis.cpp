#include "ratnet/basis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"

namespace ratnet::basis {

namespace {

constexpr double kPoleThreshold = 1e-12;
constexpr double kCoordSlack = 1e-9;

int total(std::span<const int> alpha) {
  return std::accumulate(alpha.begin(), alpha.end(), 0);
}

}  // namespace

int BasisIndexSet::max_degree(std::size_t axis) const {
  int m = 0;
  for (std::size_t j = 0; j < count(); ++j) m = std::max(m, at(j)[axis]);
  return m;
}

BasisIndexSet index_set(std::span<const int> degree, Scheme scheme) {
  if (degree.empty()) throw DomainError("index_set: empty degree vector");
  for (int d : degree)
    if (d < 0) throw DomainError("index_set: degrees must be >= 0");

  const std::size_t d = degree.size();
  const int cap = *std::max_element(degree.begin(), degree.end());

  // Enumerate tensor candidates, filter for TotalDegree, then sort graded-lex.
  std::vector<std::vector<int>> out;
  std::vector<int> alpha(d, 0);
  std::vector<int> axis_cap(d);
  for (std::size_t i = 0; i < d; ++i)
    axis_cap[i] = (scheme == Scheme::TensorProduct) ? degree[i] : cap;
  while (true) {
    if (scheme == Scheme::TensorProduct || total(alpha) <= cap)
      out.push_back(alpha);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (alpha[i] < axis_cap[i]) {
        ++alpha[i];
        std::fill(alpha.begin() + i + 1, alpha.end(), 0);
        break;
      }
      if (i == 0) goto done;
    }
  }
done:
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    int ta = std::accumulate(a.begin(), a.end(), 0);
    int tb = std::accumulate(b.begin(), b.end(), 0);
    if (ta != tb) return ta < tb;
    return a < b;
  });

  BasisIndexSet set;
  set.dim = d;
  set.indices.reserve(out.size() * d);
  for (const auto& a : out) set.indices.insert(set.indices.end(), a.begin(), a.end());
  return set;
}

std::vector<double> normalize_to_unit_box(std::span<const double> points,
                                          std::size_t dim, const Box& box,
                                          double slack) {
  box.validate();
  if (dim != box.dim() || points.size() % dim != 0)
    throw DomainError("normalize: dimension mismatch");
  std::vector<double> out(points.size());
  const std::size_t n = points.size() / dim;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < dim; ++k) {
      const double x = points[i * dim + k];
      const double lo = box.lower[k], hi = box.upper[k];
      if (x < lo - slack || x > hi + slack)
        throw DomainError("normalize: coordinate " + std::to_string(k) +
                          " of point " + std::to_string(i) + " (" +
                          std::to_string(x) + ") outside box [" +
                          std::to_string(lo) + "," + std::to_string(hi) + "]");
      double u = 2.0 * (x - lo) / (hi - lo) - 1.0;
      out[i * dim + k] = std::clamp(u, -1.0, 1.0);
    }
  }
  return out;
}

void chebyshev_values(double x, int max_degree, std::span<double> out) {
  out[0] = 1.0;
  if (max_degree >= 1) out[1] = x;
  for (int k = 2; k <= max_degree; ++k)
    out[k] = 2.0 * x * out[k - 1] - out[k - 2];
}

void eval_basis_into(std::span<const double> point, const BasisIndexSet& idx,
                     std::span<double> out) {
  const std::size_t d = idx.dim;
  if (point.size() != d) throw DomainError("eval_basis: dimension mismatch");

  // Per-axis Chebyshev tables, then a product per multi-index.
  static thread_local std::vector<double> table;
  std::vector<int> maxdeg(d);
  std::vector<std::size_t> offset(d);
  std::size_t need = 0;
  for (std::size_t k = 0; k < d; ++k) {
    maxdeg[k] = idx.max_degree(k);
    offset[k] = need;
    need += static_cast<std::size_t>(maxdeg[k]) + 1;
  }
  table.resize(need);
  for (std::size_t k = 0; k < d; ++k) {
    double x = point[k];
    if (x < -1.0 - kCoordSlack || x > 1.0 + kCoordSlack)
      throw DomainError("eval_basis: coordinate " + std::to_string(k) + " (" +
                        std::to_string(x) + ") outside [-1,1]");
    x = std::clamp(x, -1.0, 1.0);
    chebyshev_values(x, maxdeg[k],
                     std::span<double>(table.data() + offset[k],
                                       static_cast<std::size_t>(maxdeg[k]) + 1));
  }
  for (std::size_t j = 0; j < idx.count(); ++j) {
    auto alpha = idx.at(j);
    double v = 1.0;
    for (std::size_t k = 0; k < d; ++k) v *= table[offset[k] + alpha[k]];
    out[j] = v;
  }
}

std::vector<double> eval_basis(std::span<const double> point,
                               const BasisIndexSet& idx) {
  std::vector<double> out(idx.count());
  eval_basis_into(point, idx, out);
  return out;
}

Eigen::MatrixXd basis_matrix(std::span<const double> points, std::size_t dim,
                             const BasisIndexSet& idx) {
  if (dim == 0 || points.size() % dim != 0)
    throw DomainError("basis_matrix: dimension mismatch");
  const std::size_t n = points.size() / dim;
  Eigen::MatrixXd m(n, idx.count());
  std::vector<double> row(idx.count());
  for (std::size_t i = 0; i < n; ++i) {
    eval_basis_into(points.subspan(i * dim, dim), idx, row);
    for (std::size_t j = 0; j < idx.count(); ++j) m(i, j) = row[j];
  }
  return m;
}

RationalApprox RationalApprox::make(DegreeSpec spec, Box box) {
  spec.validate();
  box.validate();
  if (spec.dim() != box.dim())
    throw DomainError("rational: degree/box dimension mismatch");
  RationalApprox r;
  r.idx_num = index_set(spec.num_degree, spec.scheme);
  r.idx_den = index_set(spec.den_degree, spec.scheme);
  r.num_coeffs.assign(r.idx_num.count(), 0.0);
  r.den_coeffs.assign(r.idx_den.count(), 0.0);
  r.spec = std::move(spec);
  r.box = std::move(box);
  return r;
}

double RationalApprox::eval_normalized(std::span<const double> u) const {
  static thread_local std::vector<double> phi;
  phi.resize(std::max(idx_num.count(), idx_den.count()));
  eval_basis_into(u, idx_den, std::span<double>(phi.data(), idx_den.count()));
  double q = 0.0;
  for (std::size_t j = 0; j < idx_den.count(); ++j) q += den_coeffs[j] * phi[j];
  if (std::abs(q) < kPoleThreshold)
    throw PoleError("rational: denominator vanished at evaluation point",
                    std::vector<double>(u.begin(), u.end()));
  eval_basis_into(u, idx_num, std::span<double>(phi.data(), idx_num.count()));
  double p = 0.0;
  for (std::size_t j = 0; j < idx_num.count(); ++j) p += num_coeffs[j] * phi[j];
  return p / q;
}

double RationalApprox::eval(std::span<const double> raw_point) const {
  auto u = normalize_to_unit_box(raw_point, box.dim(), box);
  try {
    return eval_normalized(u);
  } catch (const PoleError&) {
    throw PoleError("rational: denominator vanished at evaluation point",
                    std::vector<double>(raw_point.begin(), raw_point.end()));
  }
}

double RationalApprox::eval(double x) const {
  return eval(std::span<const double>(&x, 1));
}

double eval_rational(const RationalApprox& r, std::span<const double> pt) {
  return r.eval(pt);
}

std::string RationalApprox::to_json() const {
  nlohmann::json j;
  j["box"] = {{"lower", box.lower}, {"upper", box.upper}};
  j["scheme"] = spec.scheme == Scheme::TensorProduct ? "tensor" : "total";
  j["num_degree"] = spec.num_degree;
  j["den_degree"] = spec.den_degree;
  j["num_coeffs"] = num_coeffs;
  j["den_coeffs"] = den_coeffs;
  return j.dump(2);
}

RationalApprox RationalApprox::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("rational json: ") + e.what(), 0);
  }
  try {
    DegreeSpec spec;
    spec.num_degree = j.at("num_degree").get<std::vector<int>>();
    spec.den_degree = j.at("den_degree").get<std::vector<int>>();
    const auto scheme = j.at("scheme").get<std::string>();
    if (scheme == "tensor")
      spec.scheme = Scheme::TensorProduct;
    else if (scheme == "total")
      spec.scheme = Scheme::TotalDegree;
    else
      throw ParseError("rational json: unknown scheme '" + scheme + "'", 0);
    Box box;
    box.lower = j.at("box").at("lower").get<std::vector<double>>();
    box.upper = j.at("box").at("upper").get<std::vector<double>>();
    auto r = RationalApprox::make(std::move(spec), std::move(box));
    r.num_coeffs = j.at("num_coeffs").get<std::vector<double>>();
    r.den_coeffs = j.at("den_coeffs").get<std::vector<double>>();
    if (r.num_coeffs.size() != r.idx_num.count() ||
        r.den_coeffs.size() != r.idx_den.count())
      throw ParseError("rational json: coefficient count does not match degrees",
                       0);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("rational json: ") + e.what(), 0);
  }
}

}  // namespace ratnet::basis
