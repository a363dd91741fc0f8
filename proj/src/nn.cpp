#include "ratnet/nn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "ratnet/diffcorr.hpp"

namespace ratnet::nn {

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kEps = 1e-8;
constexpr double kPoleEps = 1e-12;

struct ActEval {
  double value = 0.0;
  double deriv = 0.0;      // d sigma / d preactivation
  double p = 0.0, q = 0.0; // rational parts, for coefficient gradients
};

ActEval eval_activation(const ActivationSpec& a, double x) {
  ActEval e;
  if (a.kind == Activation::ReLU) {
    e.value = x > 0.0 ? x : 0.0;
    e.deriv = x > 0.0 ? 1.0 : 0.0;  // ReLU'(0) = 0
    return e;
  }
  const auto& c = a.rat_num;
  const auto& d = a.rat_den;
  const double p = ((c[3] * x + c[2]) * x + c[1]) * x + c[0];
  const double dp = (3.0 * c[3] * x + 2.0 * c[2]) * x + c[1];
  const double q = (d[2] * x + d[1]) * x + d[0];
  const double dq = 2.0 * d[2] * x + d[1];
  if (std::abs(q) < kPoleEps)
    throw PoleError("activation: denominator vanished at preactivation " +
                        std::to_string(x),
                    {x});
  e.value = p / q;
  e.deriv = (dp * q - p * dq) / (q * q);
  e.p = p;
  e.q = q;
  return e;
}

// Number of trainable scalars, rational coefficients included only when
// the activation is learnable.
Eigen::Index flat_size(const MlpParams& p) {
  Eigen::Index n = 3 * p.hidden() + 1;
  if (p.activation.kind == Activation::LearnableRational) n += 7;
  return n;
}

Eigen::VectorXd flatten_params(const MlpParams& p) {
  Eigen::VectorXd v(flat_size(p));
  const int h = p.hidden();
  v.segment(0, h) = p.w1;
  v.segment(h, h) = p.b1;
  v.segment(2 * h, h) = p.w2;
  v[3 * h] = p.b2;
  if (p.activation.kind == Activation::LearnableRational) {
    for (int i = 0; i < 4; ++i) v[3 * h + 1 + i] = p.activation.rat_num[i];
    for (int i = 0; i < 3; ++i) v[3 * h + 5 + i] = p.activation.rat_den[i];
  }
  return v;
}

void unflatten_params(const Eigen::VectorXd& v, MlpParams& p) {
  const int h = p.hidden();
  p.w1 = v.segment(0, h);
  p.b1 = v.segment(h, h);
  p.w2 = v.segment(2 * h, h);
  p.b2 = v[3 * h];
  if (p.activation.kind == Activation::LearnableRational) {
    for (int i = 0; i < 4; ++i) p.activation.rat_num[i] = v[3 * h + 1 + i];
    for (int i = 0; i < 3; ++i) p.activation.rat_den[i] = v[3 * h + 5 + i];
  }
}

Eigen::VectorXd flatten_grad(const Gradient& g, const MlpParams& p) {
  Eigen::VectorXd v(flat_size(p));
  const int h = p.hidden();
  v.segment(0, h) = g.w1;
  v.segment(h, h) = g.b1;
  v.segment(2 * h, h) = g.w2;
  v[3 * h] = g.b2;
  if (p.activation.kind == Activation::LearnableRational) {
    for (int i = 0; i < 4; ++i) v[3 * h + 1 + i] = g.rat_num[i];
    for (int i = 0; i < 3; ++i) v[3 * h + 5 + i] = g.rat_den[i];
  }
  return v;
}

}  // namespace

void ActivationSpec::validate() const {
  if (kind == Activation::ReLU) return;
  // Sign scan of the denominator over the operating window.
  const auto& d = rat_den;
  double prev = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double x = -10.0 + 20.0 * static_cast<double>(i) / 2000.0;
    const double q = (d[2] * x + d[1]) * x + d[0];
    if (std::abs(q) < 1e-9 || (i > 0 && (q < 0.0) != (prev < 0.0)))
      throw DomainError(
          "activation: rational denominator has a root in [-10,10]");
    prev = q;
  }
}

ActivationSpec relu_activation() { return {}; }

ActivationSpec rational_activation(const std::array<double, 4>& num,
                                   const std::array<double, 3>& den,
                                   Activation kind) {
  if (kind == Activation::ReLU)
    throw DomainError("activation: rational coefficients with ReLU kind");
  ActivationSpec a;
  a.kind = kind;
  a.rat_num = num;
  a.rat_den = den;
  a.validate();
  return a;
}

ActivationSpec relu_rational_activation(Activation kind) {
  // T0..T3 expanded to monomials; the fit lives on [-1,1] so the affine
  // map is the identity.
  static const auto coeffs = [] {
    const auto r = diffcorr::fit_relu_rational();
    const auto& a = r.num_coeffs;
    const auto& b = r.den_coeffs;
    std::array<double, 4> num{a[0] - a[2], a[1] - 3.0 * a[3], 2.0 * a[2],
                              4.0 * a[3]};
    std::array<double, 3> den{b[0] - b[2], b[1], 2.0 * b[2]};
    return std::make_pair(num, den);
  }();
  return rational_activation(coeffs.first, coeffs.second, kind);
}

MlpParams init_params(int hidden, const ActivationSpec& act,
                      std::uint64_t seed) {
  if (hidden < 1) throw DomainError("nn: hidden must be >= 1");
  act.validate();
  MlpParams p;
  p.activation = act;
  std::mt19937_64 rng(seed);
  auto draw = [&](double bound) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    return dist(rng);
  };
  p.w1.resize(hidden);
  p.b1.resize(hidden);
  p.w2.resize(hidden);
  const double in_bound = 1.0;                     // fan_in = 1
  const double out_bound = 1.0 / std::sqrt(hidden);  // fan_in = hidden
  for (int j = 0; j < hidden; ++j) p.w1[j] = draw(in_bound);
  for (int j = 0; j < hidden; ++j) p.b1[j] = draw(in_bound);
  for (int j = 0; j < hidden; ++j) p.w2[j] = draw(out_bound);
  p.b2 = draw(out_bound);
  return p;
}

double forward(const MlpParams& p, double x) {
  if (!std::isfinite(x)) throw DomainError("nn: input must be finite");
  double y = p.b2;
  for (int j = 0; j < p.hidden(); ++j) {
    const double pre = p.w1[j] * x + p.b1[j];
    y += p.w2[j] * eval_activation(p.activation, pre).value;
  }
  return y;
}

double loss(const MlpParams& p, const SampleSet& samples, Loss kind) {
  if (samples.dim != 1) throw DomainError("nn: samples must be univariate");
  const std::size_t n = samples.size();
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = forward(p, samples.points[i]) - samples.values[i];
    if (kind == Loss::MSE)
      acc += r * r;
    else
      acc = std::max(acc, std::abs(r));
  }
  return kind == Loss::MSE ? acc / static_cast<double>(n) : acc;
}

Gradient backward(const MlpParams& p, const SampleSet& samples, Loss kind) {
  if (samples.dim != 1) throw DomainError("nn: samples must be univariate");
  const std::size_t n = samples.size();
  const int h = p.hidden();
  Gradient g;
  g.w1 = Eigen::VectorXd::Zero(h);
  g.b1 = Eigen::VectorXd::Zero(h);
  g.w2 = Eigen::VectorXd::Zero(h);

  const bool learn_rat = p.activation.kind == Activation::LearnableRational;

  auto accumulate = [&](double x, double dLdy) {
    for (int j = 0; j < h; ++j) {
      const double pre = p.w1[j] * x + p.b1[j];
      const ActEval e = eval_activation(p.activation, pre);
      g.w2[j] += dLdy * e.value;
      const double back = dLdy * p.w2[j];
      g.w1[j] += back * e.deriv * x;
      g.b1[j] += back * e.deriv;
      if (learn_rat) {
        double xk = 1.0;
        for (int k = 0; k < 4; ++k) {
          g.rat_num[k] += back * xk / e.q;
          if (k < 3) g.rat_den[k] += back * (-e.p * xk / (e.q * e.q));
          xk *= pre;
        }
      }
    }
    g.b2 += dLdy;
  };

  if (kind == Loss::MSE) {
    for (std::size_t i = 0; i < n; ++i) {
      const double r = forward(p, samples.points[i]) - samples.values[i];
      accumulate(samples.points[i], 2.0 * r / static_cast<double>(n));
    }
  } else {
    // Subgradient at the sample of maximum |residual|, lowest index wins.
    std::size_t imax = 0;
    double worst = -1.0, rmax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = forward(p, samples.points[i]) - samples.values[i];
      if (std::abs(r) > worst) {
        worst = std::abs(r);
        rmax = r;
        imax = i;
      }
    }
    accumulate(samples.points[imax], rmax >= 0.0 ? 1.0 : -1.0);
  }
  return g;
}

OptState make_opt_state(Eigen::Index size) {
  OptState s;
  s.m = Eigen::VectorXd::Zero(size);
  s.v = Eigen::VectorXd::Zero(size);
  return s;
}

void adam_step(OptState& s, Eigen::Ref<Eigen::VectorXd> params,
               const Eigen::VectorXd& grad, double lr) {
  ++s.t;
  s.m = kBeta1 * s.m + (1.0 - kBeta1) * grad;
  s.v = kBeta2 * s.v + (1.0 - kBeta2) * grad.cwiseProduct(grad);
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(s.t));
  const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(s.t));
  params -= (lr / bc1) * s.m.cwiseQuotient(
                 ((s.v / bc2).cwiseSqrt().array() + kEps).matrix());
}

void adamax_step(OptState& s, Eigen::Ref<Eigen::VectorXd> params,
                 const Eigen::VectorXd& grad, double lr) {
  ++s.t;
  s.m = kBeta1 * s.m + (1.0 - kBeta1) * grad;
  s.v = (kBeta2 * s.v).cwiseMax(grad.cwiseAbs());  // infinity-norm moment
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(s.t));
  for (Eigen::Index i = 0; i < params.size(); ++i) {
    if (s.v[i] > 0.0) params[i] -= (lr / bc1) * s.m[i] / s.v[i];
  }
}

void TrainConfig::validate() const {
  if (epochs < 0) throw DomainError("nn: epochs must be >= 0");
  if (!(lr > 0.0)) throw DomainError("nn: learning rate must be positive");
  for (double s : block_lr_scale)
    if (s < 0.0) throw DomainError("nn: block lr scale must be >= 0");
}

namespace {

TrainReport run_training(MlpParams& p, const SampleSet& samples,
                         const TrainConfig& cfg, bool split) {
  const auto t0 = std::chrono::steady_clock::now();
  cfg.validate();
  if (split && p.activation.kind != Activation::LearnableRational)
    throw DomainError("nn: split training requires a learnable activation");

  const Optimizer opt = cfg.resolved_optimizer();
  auto step = [&](OptState& s, Eigen::Ref<Eigen::VectorXd> params,
                  const Eigen::VectorXd& grad, double lr) {
    if (opt == Optimizer::Adam)
      adam_step(s, params, grad, lr);
    else
      adamax_step(s, params, grad, lr);
  };

  TrainReport rep;
  const int h = p.hidden();
  const Eigen::Index nflat = flat_size(p);

  OptState whole = make_opt_state(nflat);
  // Split mode: (w1,b1) | (w2,b2) | rational coefficients.
  OptState blk1 = make_opt_state(2 * h);
  OptState blk2 = make_opt_state(h + 1);
  OptState blk3 = make_opt_state(7);

  try {
    if (cfg.epochs == 0) {
      rep.final_loss = rep.min_loss = loss(p, samples, cfg.loss);
      rep.min_loss_epoch = 0;
      return rep;
    }

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
      if (!split) {
        const Eigen::VectorXd grad = flatten_grad(backward(p, samples, cfg.loss), p);
        Eigen::VectorXd flat = flatten_params(p);
        step(whole, flat, grad, cfg.lr);
        unflatten_params(flat, p);
      } else {
        Eigen::VectorXd flat = flatten_params(p);
        {
          const Eigen::VectorXd grad =
              flatten_grad(backward(p, samples, cfg.loss), p);
          auto seg = flat.segment(0, 2 * h);
          step(blk1, seg, grad.segment(0, 2 * h), cfg.lr * cfg.block_lr_scale[0]);
          unflatten_params(flat, p);
        }
        {
          const Eigen::VectorXd grad =
              flatten_grad(backward(p, samples, cfg.loss), p);
          auto seg = flat.segment(2 * h, h + 1);
          step(blk2, seg, grad.segment(2 * h, h + 1),
               cfg.lr * cfg.block_lr_scale[1]);
          unflatten_params(flat, p);
        }
        {
          const Eigen::VectorXd grad =
              flatten_grad(backward(p, samples, cfg.loss), p);
          auto seg = flat.segment(3 * h + 1, 7);
          step(blk3, seg, grad.segment(3 * h + 1, 7),
               cfg.lr * cfg.block_lr_scale[2]);
          unflatten_params(flat, p);
        }
      }
      rep.per_epoch_loss.push_back(loss(p, samples, cfg.loss));
    }
  } catch (const PoleError&) {
    // Epoch aborted; report what was completed and flag the pole.
    rep.pole_flag = true;
  }

  if (rep.per_epoch_loss.empty()) {
    rep.final_loss = rep.min_loss =
        rep.pole_flag ? std::numeric_limits<double>::infinity()
                      : loss(p, samples, cfg.loss);
    rep.min_loss_epoch = 0;
  } else {
    rep.final_loss = rep.per_epoch_loss.back();
    auto it = std::min_element(rep.per_epoch_loss.begin(),
                               rep.per_epoch_loss.end());
    rep.min_loss = *it;
    rep.min_loss_epoch =
        static_cast<int>(it - rep.per_epoch_loss.begin()) + 1;
  }
  const double total =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  rep.wall_time_per_epoch =
      rep.per_epoch_loss.empty() ? total
                                 : total / static_cast<double>(
                                               rep.per_epoch_loss.size());
  return rep;
}

}  // namespace

TrainReport train(MlpParams& p, const SampleSet& samples,
                  const TrainConfig& cfg) {
  return run_training(p, samples, cfg, cfg.mode == TrainMode::Split);
}

TrainReport train_split(MlpParams& p, const SampleSet& samples,
                        const TrainConfig& cfg) {
  return run_training(p, samples, cfg, true);
}

}  // namespace ratnet::nn
