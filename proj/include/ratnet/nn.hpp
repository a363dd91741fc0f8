#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <optional>

#include "ratnet/types.hpp"

namespace ratnet::nn {

enum class Activation { ReLU, FixedRational, LearnableRational };
enum class Loss { MSE, Uniform };
enum class Optimizer { Adam, Adamax };
enum class TrainMode { Standard, Split };

// Degree-(3,2) rational activation in monomial form:
//   r(x) = (c0 + c1 x + c2 x^2 + c3 x^3) / (d0 + d1 x + d2 x^2).
struct ActivationSpec {
  Activation kind = Activation::ReLU;
  std::array<double, 4> rat_num{};
  std::array<double, 3> rat_den{};

  bool rational() const { return kind != Activation::ReLU; }
  // Rejects rational activations whose denominator has a real root inside
  // the operating window [-10, 10].
  void validate() const;
};

ActivationSpec relu_activation();
ActivationSpec rational_activation(const std::array<double, 4>& num,
                                   const std::array<double, 3>& den,
                                   Activation kind);
// Coefficients of the best (3,2) uniform approximation to ReLU on [-1,1];
// computed once and cached.
ActivationSpec relu_rational_activation(
    Activation kind = Activation::FixedRational);

// 1 -> hidden -> 1 dense network.
struct MlpParams {
  Eigen::VectorXd w1, b1, w2;
  double b2 = 0.0;
  ActivationSpec activation;

  int hidden() const { return static_cast<int>(w1.size()); }
};

// Weights drawn uniformly from [-1/sqrt(fan_in), 1/sqrt(fan_in)].
MlpParams init_params(int hidden, const ActivationSpec& act,
                      std::uint64_t seed);

double forward(const MlpParams& p, double x);
double loss(const MlpParams& p, const SampleSet& samples, Loss kind);

struct Gradient {
  Eigen::VectorXd w1, b1, w2;
  double b2 = 0.0;
  std::array<double, 4> rat_num{};
  std::array<double, 3> rat_den{};
};

// Exact gradient for MSE; for Uniform the subgradient at the sample of
// maximum |residual| (lowest index on ties). Rational coefficients get
// gradients only for LearnableRational.
Gradient backward(const MlpParams& p, const SampleSet& samples, Loss kind);

// Flat-vector optimizer state (first moment + second moment / inf-norm).
struct OptState {
  Eigen::VectorXd m, v;
  long t = 0;
};

OptState make_opt_state(Eigen::Index size);
void adam_step(OptState& s, Eigen::Ref<Eigen::VectorXd> params,
               const Eigen::VectorXd& grad, double lr);
void adamax_step(OptState& s, Eigen::Ref<Eigen::VectorXd> params,
                 const Eigen::VectorXd& grad, double lr);

struct TrainConfig {
  Loss loss = Loss::Uniform;
  std::optional<Optimizer> optimizer;  // default pairs Adam/MSE, Adamax/Uniform
  TrainMode mode = TrainMode::Standard;
  int epochs = 200;
  double lr = 1e-2;
  std::uint64_t seed = 1;
  // Per-block learning-rate scaling for split training:
  // (w1,b1), (w2,b2), rational coefficients.
  std::array<double, 3> block_lr_scale{1.0, 1.0, 1.0};

  Optimizer resolved_optimizer() const {
    if (optimizer) return *optimizer;
    return loss == Loss::MSE ? Optimizer::Adam : Optimizer::Adamax;
  }
  void validate() const;
};

struct TrainReport {
  double final_loss = 0.0;
  double min_loss = 0.0;
  int min_loss_epoch = 0;  // 1-based; 0 when no epochs ran
  std::vector<double> per_epoch_loss;
  double wall_time_per_epoch = 0.0;
  bool pole_flag = false;
};

// Full-batch training, one optimizer step per epoch; deterministic for a
// fixed seed and config.
TrainReport train(MlpParams& p, const SampleSet& samples,
                  const TrainConfig& cfg);

// Block-coordinate variant: each epoch updates (w1,b1), then (w2,b2), then
// the rational coefficients, each block with its own optimizer state.
TrainReport train_split(MlpParams& p, const SampleSet& samples,
                        const TrainConfig& cfg);

}  // namespace ratnet::nn
