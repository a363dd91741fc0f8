#pragma once

#include <span>
#include <string>
#include <vector>

#include "ratnet/types.hpp"

namespace ratnet::data {

// Tensor grid of function values. Axes hold sorted coordinate vectors and
// values are stored row-major with the last axis fastest.
struct GridDataset {
  std::vector<std::vector<double>> axes;
  std::vector<double> values;
  Box box;

  std::size_t dim() const { return axes.size(); }
  std::size_t count() const;
  void validate() const;
};

// Builtin targets: "sqrt_abs_shift" (univariate, the nonsmooth benchmark),
// "relu", and "kdv_like" (a smooth soliton-shaped bivariate stand-in).
enum class Target { SqrtAbsShift, Relu, KdvLike };

Target target_from_name(const std::string& name);
std::size_t target_dim(Target t);
double eval_target(Target t, std::span<const double> pt);
Box default_box(Target t);

// Uniform inclusive grid of n_per_dim points per axis over `box`.
GridDataset function_grid(const std::string& name, const Box& box,
                          std::span<const int> n_per_dim);
SampleSet sample_function(const std::string& name, const Box& box,
                          std::span<const int> n_per_dim);

// Plain-text grid format: line 1 holds the dimension d, the next d lines
// hold the axis coordinate lists, and the remaining lines hold row-major
// values. save/load round-trips doubles exactly.
GridDataset load_grid(const std::string& path);
void save_grid(const GridDataset& g, const std::string& path);

// Keeps indices 0, k, 2k, ... along every axis; the box is unchanged so
// normalization stays comparable across k.
GridDataset subsample_every_k(const GridDataset& g, int k);

SampleSet to_sample_set(const GridDataset& g);

}  // namespace ratnet::data
