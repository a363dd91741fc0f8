#include "ratnet/data.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace ratnet::data {

std::size_t GridDataset::count() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size();
  return axes.empty() ? 0 : n;
}

void GridDataset::validate() const {
  if (axes.empty()) throw DomainError("grid: no axes");
  for (std::size_t k = 0; k < axes.size(); ++k) {
    const auto& a = axes[k];
    if (a.size() < 2)
      throw DomainError("grid: axis " + std::to_string(k) +
                        " needs at least 2 points");
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (!std::isfinite(a[i]))
        throw DomainError("grid: axis coordinates must be finite");
      if (i > 0 && !(a[i - 1] < a[i]))
        throw DomainError("grid: axis " + std::to_string(k) +
                          " must be strictly increasing");
    }
  }
  if (values.size() != count())
    throw DomainError("grid: value count " + std::to_string(values.size()) +
                      " does not match grid size " + std::to_string(count()));
  for (double v : values)
    if (!std::isfinite(v)) throw DomainError("grid: values must be finite");
  box.validate();
}

Target target_from_name(const std::string& name) {
  if (name == "sqrt_abs_shift") return Target::SqrtAbsShift;
  if (name == "relu") return Target::Relu;
  if (name == "kdv_like") return Target::KdvLike;
  throw DomainError("unknown target function '" + name + "'");
}

std::size_t target_dim(Target t) { return t == Target::KdvLike ? 2 : 1; }

double eval_target(Target t, std::span<const double> pt) {
  switch (t) {
    case Target::SqrtAbsShift:
      return std::sqrt(std::abs(pt[0] - 0.25));
    case Target::Relu:
      return std::max(0.0, pt[0]);
    case Target::KdvLike: {
      const double x = pt[0], tt = pt[1];
      const double s = 1.0 / std::cosh((x - 20.0 - tt) / 4.0);
      return -std::sin(std::numbers::pi * x / 20.0) * s * s;
    }
  }
  throw DomainError("unknown target");
}

Box default_box(Target t) {
  Box b;
  if (t == Target::KdvLike) {
    b.lower = {0.0, -20.0};
    b.upper = {40.0, 19.84375};
  } else {
    b.lower = {-1.0};
    b.upper = {1.0};
  }
  return b;
}

GridDataset function_grid(const std::string& name, const Box& box,
                          std::span<const int> n_per_dim) {
  const Target t = target_from_name(name);
  box.validate();
  if (box.dim() != target_dim(t))
    throw DomainError("target '" + name + "' is " +
                      std::to_string(target_dim(t)) + "-dimensional");
  if (n_per_dim.size() != box.dim())
    throw DomainError("grid sizes must match box dimension");

  GridDataset g;
  g.box = box;
  for (std::size_t k = 0; k < box.dim(); ++k) {
    const int n = n_per_dim[k];
    if (n < 2) throw DomainError("need at least 2 grid points per axis");
    std::vector<double> axis(n);
    for (int i = 0; i < n; ++i)
      axis[i] = box.lower[k] +
                (box.upper[k] - box.lower[k]) * static_cast<double>(i) /
                    static_cast<double>(n - 1);
    axis.back() = box.upper[k];
    g.axes.push_back(std::move(axis));
  }
  g.values.resize(g.count());
  std::vector<double> pt(g.dim());
  for (std::size_t flat = 0; flat < g.values.size(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t k = g.dim(); k-- > 0;) {
      pt[k] = g.axes[k][rem % g.axes[k].size()];
      rem /= g.axes[k].size();
    }
    g.values[flat] = eval_target(t, pt);
  }
  return g;
}

SampleSet sample_function(const std::string& name, const Box& box,
                          std::span<const int> n_per_dim) {
  return to_sample_set(function_grid(name, box, n_per_dim));
}

namespace {

double parse_double(const std::string& tok, const std::string& what,
                    long line_no) {
  try {
    std::size_t used = 0;
    double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw ParseError("grid file: bad number '" + tok + "' in " + what,
                     line_no);
  }
}

}  // namespace

GridDataset load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("grid file: cannot open '" + path + "'", 0);

  long line_no = 0;
  std::string line;
  auto next_content_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  auto split = [&](const std::string& what) {
    std::vector<double> out;
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) out.push_back(parse_double(tok, what, line_no));
    return out;
  };

  if (!next_content_line())
    throw ParseError("grid file: empty file", line_no);
  const auto head = split("dimension");
  const int d = head.empty() ? 0 : static_cast<int>(head[0]);
  if (head.size() != 1 || head[0] != d || d < 1 || d > 16)
    throw ParseError("grid file: line 1 must hold a dimension in [1,16]",
                     line_no);

  GridDataset g;
  for (int k = 0; k < d; ++k) {
    if (!next_content_line())
      throw ParseError("grid file: missing axis " + std::to_string(k),
                       line_no);
    auto axis = split("axis " + std::to_string(k));
    if (axis.size() < 2)
      throw ParseError("grid file: axis " + std::to_string(k) +
                           " needs at least 2 coordinates",
                       line_no);
    g.axes.push_back(std::move(axis));
  }

  const std::size_t expect = g.count();
  g.values.reserve(expect);
  while (g.values.size() < expect && next_content_line()) {
    for (double v : split("values")) g.values.push_back(v);
  }
  if (g.values.size() < expect)
    throw ParseError("grid file: expected " + std::to_string(expect) +
                         " values, found " + std::to_string(g.values.size()),
                     line_no);
  if (g.values.size() > expect || next_content_line())
    throw ParseError("grid file: more values than the declared shape " +
                         std::to_string(expect),
                     line_no);

  g.box.lower.resize(d);
  g.box.upper.resize(d);
  for (int k = 0; k < d; ++k) {
    g.box.lower[k] = g.axes[k].front();
    g.box.upper[k] = g.axes[k].back();
  }
  try {
    g.validate();
  } catch (const DomainError& e) {
    throw ParseError(std::string("grid file: ") + e.what(), line_no);
  }
  return g;
}

void save_grid(const GridDataset& g, const std::string& path) {
  g.validate();
  std::ofstream out(path);
  if (!out) throw DomainError("grid file: cannot write '" + path + "'");
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf;
  };
  out << g.dim() << "\n";
  for (const auto& axis : g.axes) {
    for (std::size_t i = 0; i < axis.size(); ++i) {
      if (i) out << " ";
      put(axis[i]);
    }
    out << "\n";
  }
  const std::size_t row = g.axes.back().size();
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    put(g.values[i]);
    out << ((i + 1) % row == 0 ? "\n" : " ");
  }
}

GridDataset subsample_every_k(const GridDataset& g, int k) {
  g.validate();
  if (k < 1) throw DomainError("subsample: k must be >= 1");
  if (k == 1) return g;

  GridDataset out;
  out.box = g.box;
  std::vector<std::vector<std::size_t>> keep(g.dim());
  for (std::size_t a = 0; a < g.dim(); ++a) {
    for (std::size_t i = 0; i < g.axes[a].size(); i += k)
      keep[a].push_back(i);
    if (keep[a].size() < 2)
      throw DomainError("subsample: k=" + std::to_string(k) +
                        " leaves fewer than 2 points on axis " +
                        std::to_string(a));
    std::vector<double> axis;
    for (std::size_t i : keep[a]) axis.push_back(g.axes[a][i]);
    out.axes.push_back(std::move(axis));
  }

  std::vector<std::size_t> stride(g.dim(), 1);
  for (std::size_t a = g.dim() - 1; a > 0; --a)
    stride[a - 1] = stride[a] * g.axes[a].size();

  out.values.resize(out.count());
  std::vector<std::size_t> pos(g.dim(), 0);
  for (std::size_t flat = 0; flat < out.values.size(); ++flat) {
    std::size_t rem = flat, src = 0;
    for (std::size_t a = g.dim(); a-- > 0;) {
      const std::size_t na = keep[a].size();
      src += keep[a][rem % na] * stride[a];
      rem /= na;
    }
    out.values[flat] = g.values[src];
  }
  return out;
}

SampleSet to_sample_set(const GridDataset& g) {
  g.validate();
  SampleSet s;
  s.dim = g.dim();
  s.box = g.box;
  s.values = g.values;
  s.points.resize(g.count() * g.dim());
  for (std::size_t flat = 0; flat < g.count(); ++flat) {
    std::size_t rem = flat;
    for (std::size_t a = g.dim(); a-- > 0;) {
      s.points[flat * g.dim() + a] = g.axes[a][rem % g.axes[a].size()];
      rem /= g.axes[a].size();
    }
  }
  return s;
}

}  // namespace ratnet::data
