#include "ratnet/ratnet.h"

#include <cstring>
#include <new>
#include <string>

#include "ratnet/aaa.hpp"
#include "ratnet/basis.hpp"
#include "ratnet/bisection.hpp"
#include "ratnet/data.hpp"
#include "ratnet/diffcorr.hpp"
#include "ratnet/nn.hpp"
#include "ratnet/types.hpp"

struct ratnet_samples {
  ratnet::SampleSet s;
};
struct ratnet_grid {
  ratnet::data::GridDataset g;
};
struct ratnet_rational {
  ratnet::basis::RationalApprox r;
};
struct ratnet_bary {
  ratnet::aaa::BarycentricRational b;
};
struct ratnet_mlp {
  ratnet::nn::MlpParams p;
};
struct ratnet_report {
  ratnet::FitReport fit;
  ratnet::nn::TrainReport train;
  std::vector<ratnet::bisection::TraceRow> trace;
  bool is_train = false;
};

namespace {

thread_local std::string g_last_error;

template <class F>
ratnet_status guarded(F&& fn) {
  try {
    fn();
    return RATNET_OK;
  } catch (const ratnet::PoleError& e) {
    g_last_error = e.what();
    return RATNET_ERR_POLE;
  } catch (const ratnet::ParseError& e) {
    g_last_error = e.what();
    return RATNET_ERR_PARSE;
  } catch (const ratnet::NumericalError& e) {
    g_last_error = e.what();
    return RATNET_ERR_NUMERICAL;
  } catch (const ratnet::DomainError& e) {
    g_last_error = e.what();
    return RATNET_ERR_DOMAIN;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RATNET_ERR_NUMERICAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RATNET_ERR_NUMERICAL;
  }
}

ratnet_status bad_argument(const char* what) {
  g_last_error = what;
  return RATNET_ERR_ARGUMENT;
}

ratnet::DegreeSpec to_spec(const ratnet_degrees& d) {
  if (d.dim < 1 || d.dim > RATNET_MAX_DIM)
    throw ratnet::DomainError("degrees: dim must be in [1, 8]");
  ratnet::DegreeSpec spec;
  spec.num_degree.assign(d.num_degree, d.num_degree + d.dim);
  spec.den_degree.assign(d.den_degree, d.den_degree + d.dim);
  spec.scheme = d.tensor_scheme ? ratnet::Scheme::TensorProduct
                                : ratnet::Scheme::TotalDegree;
  spec.validate();
  return spec;
}

ratnet::bisection::BisectOptions to_opts(const ratnet_bisect_options* o) {
  ratnet::bisection::BisectOptions opts;
  if (!o) return opts;
  opts.z_lo = o->z_lo;
  if (o->has_z_hi) opts.z_hi = o->z_hi;
  opts.z_tol = o->z_tol;
  opts.den_lower = o->den_lower;
  if (o->has_den_upper) opts.den_upper = o->den_upper;
  opts.max_outer = o->max_outer;
  return opts;
}

ratnet::Box to_box(const double* lower, const double* upper, int dim) {
  ratnet::Box box;
  box.lower.assign(lower, lower + dim);
  box.upper.assign(upper, upper + dim);
  return box;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

ratnet_report* fit_report(ratnet::FitReport rep,
                          std::vector<ratnet::bisection::TraceRow> trace = {}) {
  auto* r = new ratnet_report;
  r->fit = std::move(rep);
  r->trace = std::move(trace);
  return r;
}

}  // namespace

extern "C" {

const char* ratnet_last_error(void) { return g_last_error.c_str(); }

/* ---------------- samples ---------------- */

ratnet_status ratnet_samples_from_function(const char* name,
                                           const double* lower,
                                           const double* upper,
                                           const int* n_per_dim, int dim,
                                           ratnet_samples** out) {
  if (!name || !lower || !upper || !n_per_dim || !out || dim < 1)
    return bad_argument("samples_from_function: null argument");
  return guarded([&] {
    auto s = ratnet::data::sample_function(
        name, to_box(lower, upper, dim),
        std::span<const int>(n_per_dim, static_cast<std::size_t>(dim)));
    *out = new ratnet_samples{std::move(s)};
  });
}

ratnet_status ratnet_samples_create(int dim, const double* points,
                                    const double* values, size_t count,
                                    const double* lower, const double* upper,
                                    ratnet_samples** out) {
  if (!points || !values || !lower || !upper || !out || dim < 1 || count == 0)
    return bad_argument("samples_create: null argument");
  return guarded([&] {
    ratnet::SampleSet s;
    s.dim = static_cast<std::size_t>(dim);
    s.points.assign(points, points + count * static_cast<std::size_t>(dim));
    s.values.assign(values, values + count);
    s.box = to_box(lower, upper, dim);
    s.validate(1);
    *out = new ratnet_samples{std::move(s)};
  });
}

size_t ratnet_samples_count(const ratnet_samples* s) {
  return s ? s->s.size() : 0;
}

int ratnet_samples_dim(const ratnet_samples* s) {
  return s ? static_cast<int>(s->s.dim) : 0;
}

ratnet_status ratnet_samples_get(const ratnet_samples* s, size_t i,
                                 double* point, double* value) {
  if (!s || i >= s->s.size()) return bad_argument("samples_get: bad index");
  auto pt = s->s.point(i);
  if (point) std::memcpy(point, pt.data(), pt.size() * sizeof(double));
  if (value) *value = s->s.values[i];
  return RATNET_OK;
}

ratnet_status ratnet_samples_box(const ratnet_samples* s, double* lower,
                                 double* upper) {
  if (!s) return bad_argument("samples_box: null handle");
  if (lower)
    std::memcpy(lower, s->s.box.lower.data(),
                s->s.box.dim() * sizeof(double));
  if (upper)
    std::memcpy(upper, s->s.box.upper.data(),
                s->s.box.dim() * sizeof(double));
  return RATNET_OK;
}

void ratnet_samples_free(ratnet_samples* s) { delete s; }

/* ---------------- grids ---------------- */

ratnet_status ratnet_grid_load(const char* path, ratnet_grid** out) {
  if (!path || !out) return bad_argument("grid_load: null argument");
  return guarded([&] {
    *out = new ratnet_grid{ratnet::data::load_grid(path)};
  });
}

ratnet_status ratnet_grid_save(const ratnet_grid* g, const char* path) {
  if (!g || !path) return bad_argument("grid_save: null argument");
  return guarded([&] { ratnet::data::save_grid(g->g, path); });
}

ratnet_status ratnet_grid_from_function(const char* name, const double* lower,
                                        const double* upper,
                                        const int* n_per_dim, int dim,
                                        ratnet_grid** out) {
  if (!name || !lower || !upper || !n_per_dim || !out || dim < 1)
    return bad_argument("grid_from_function: null argument");
  return guarded([&] {
    auto g = ratnet::data::function_grid(
        name, to_box(lower, upper, dim),
        std::span<const int>(n_per_dim, static_cast<std::size_t>(dim)));
    *out = new ratnet_grid{std::move(g)};
  });
}

int ratnet_grid_dim(const ratnet_grid* g) {
  return g ? static_cast<int>(g->g.dim()) : 0;
}

size_t ratnet_grid_axis_size(const ratnet_grid* g, int axis) {
  if (!g || axis < 0 || axis >= static_cast<int>(g->g.dim())) return 0;
  return g->g.axes[static_cast<std::size_t>(axis)].size();
}

ratnet_status ratnet_grid_subsample(const ratnet_grid* g, int k,
                                    ratnet_grid** out) {
  if (!g || !out) return bad_argument("grid_subsample: null argument");
  return guarded([&] {
    *out = new ratnet_grid{ratnet::data::subsample_every_k(g->g, k)};
  });
}

ratnet_status ratnet_grid_to_samples(const ratnet_grid* g,
                                     ratnet_samples** out) {
  if (!g || !out) return bad_argument("grid_to_samples: null argument");
  return guarded([&] {
    *out = new ratnet_samples{ratnet::data::to_sample_set(g->g)};
  });
}

void ratnet_grid_free(ratnet_grid* g) { delete g; }

/* ---------------- degrees ---------------- */

ratnet_degrees ratnet_degrees_univariate(int num, int den) {
  return ratnet_degrees_uniform(1, num, den);
}

ratnet_degrees ratnet_degrees_uniform(int dim, int num, int den) {
  ratnet_degrees d{};
  d.dim = dim;
  for (int i = 0; i < RATNET_MAX_DIM; ++i) {
    d.num_degree[i] = num;
    d.den_degree[i] = den;
  }
  d.tensor_scheme = 0;
  return d;
}

/* ---------------- diffcorr ---------------- */

ratnet_fit_options ratnet_fit_options_default(void) {
  return ratnet_fit_options{100, 1e-10};
}

ratnet_status ratnet_fit_diffcorr(const ratnet_samples* s,
                                  const ratnet_degrees* degrees,
                                  const ratnet_fit_options* opts,
                                  ratnet_rational** approx,
                                  ratnet_report** report) {
  if (!s || !degrees || !approx)
    return bad_argument("fit_diffcorr: null argument");
  return guarded([&] {
    ratnet::diffcorr::Options o;
    if (opts) {
      o.max_iters = opts->max_iters;
      o.tol = opts->tol;
    }
    auto res = ratnet::diffcorr::fit(s->s, to_spec(*degrees), o);
    *approx = new ratnet_rational{std::move(res.approx)};
    if (report) *report = fit_report(std::move(res.report));
  });
}

ratnet_status ratnet_fit_relu_rational(int num_degree, int den_degree,
                                       double lo, double hi, int n_points,
                                       ratnet_rational** approx) {
  if (!approx) return bad_argument("fit_relu_rational: null output");
  return guarded([&] {
    ratnet::Box box;
    box.lower = {lo};
    box.upper = {hi};
    auto r = ratnet::diffcorr::fit_relu_rational(
        ratnet::univariate_degrees(num_degree, den_degree), box, n_points);
    *approx = new ratnet_rational{std::move(r)};
  });
}

ratnet_status ratnet_relu_rational_coeffs(double* num4, double* den3) {
  if (!num4 || !den3) return bad_argument("relu_rational_coeffs: null buffer");
  return guarded([&] {
    const auto a = ratnet::nn::relu_rational_activation();
    for (int i = 0; i < 4; ++i) num4[i] = a.rat_num[i];
    for (int i = 0; i < 3; ++i) den3[i] = a.rat_den[i];
  });
}

/* ---------------- bisection ---------------- */

ratnet_bisect_options ratnet_bisect_options_default(void) {
  ratnet_bisect_options o{};
  o.z_lo = 0.0;
  o.z_hi = 0.0;
  o.has_z_hi = 0;
  o.z_tol = 1e-6;
  o.den_lower = 1e-2;
  o.den_upper = 0.0;
  o.has_den_upper = 0;
  o.max_outer = 60;
  return o;
}

ratnet_status ratnet_fit_bisect(const ratnet_samples* s,
                                const ratnet_degrees* degrees,
                                const ratnet_bisect_options* opts,
                                ratnet_rational** approx,
                                ratnet_report** report) {
  if (!s || !degrees || !approx) return bad_argument("fit_bisect: null argument");
  return guarded([&] {
    auto res = ratnet::bisection::bisect_fit(s->s, to_spec(*degrees),
                                             to_opts(opts));
    *approx = new ratnet_rational{std::move(res.approx)};
    if (report)
      *report = fit_report(std::move(res.report), std::move(res.trace));
  });
}

ratnet_status ratnet_bisect_feasible(const ratnet_samples* s,
                                     const ratnet_degrees* degrees, double z,
                                     const ratnet_bisect_options* opts,
                                     int* feasible,
                                     ratnet_rational** witness) {
  if (!s || !degrees || !feasible)
    return bad_argument("bisect_feasible: null argument");
  return guarded([&] {
    auto res =
        ratnet::bisection::feasible(s->s, to_spec(*degrees), z, to_opts(opts));
    *feasible = res.feasible ? 1 : 0;
    if (witness)
      *witness = res.witness ? new ratnet_rational{std::move(*res.witness)}
                             : nullptr;
  });
}

ratnet_status ratnet_condition_estimate(const ratnet_samples* s,
                                        const ratnet_degrees* degrees,
                                        double z,
                                        const ratnet_bisect_options* opts,
                                        double* out) {
  if (!s || !degrees || !out)
    return bad_argument("condition_estimate: null argument");
  return guarded([&] {
    *out = ratnet::bisection::condition_estimate(s->s, to_spec(*degrees), z,
                                                 to_opts(opts));
  });
}

/* ---------------- AAA ---------------- */

ratnet_status ratnet_fit_aaa(const ratnet_samples* s, int m_max,
                             double rel_tol, ratnet_bary** approx,
                             ratnet_report** report) {
  if (!s || !approx) return bad_argument("fit_aaa: null argument");
  return guarded([&] {
    auto res = ratnet::aaa::aaa_fit(s->s, m_max, rel_tol);
    *approx = new ratnet_bary{std::move(res.approx)};
    if (report) *report = fit_report(std::move(res.report));
  });
}

ratnet_status ratnet_bary_eval(const ratnet_bary* b, double x, double* out) {
  if (!b || !out) return bad_argument("bary_eval: null argument");
  return guarded([&] { *out = ratnet::aaa::bary_eval(b->b, x); });
}

ratnet_status ratnet_bary_mse(const ratnet_bary* b, const ratnet_samples* s,
                              double* out) {
  if (!b || !s || !out) return bad_argument("bary_mse: null argument");
  return guarded([&] { *out = ratnet::aaa::mse(b->b, s->s); });
}

size_t ratnet_bary_size(const ratnet_bary* b) { return b ? b->b.size() : 0; }

ratnet_status ratnet_bary_data(const ratnet_bary* b, double* support,
                               double* values, double* weights) {
  if (!b) return bad_argument("bary_data: null handle");
  const size_t n = b->b.size();
  if (support) std::memcpy(support, b->b.support.data(), n * sizeof(double));
  if (values) std::memcpy(values, b->b.values.data(), n * sizeof(double));
  if (weights) std::memcpy(weights, b->b.weights.data(), n * sizeof(double));
  return RATNET_OK;
}

ratnet_status ratnet_bary_to_json(const ratnet_bary* b, char** out) {
  if (!b || !out) return bad_argument("bary_to_json: null argument");
  return guarded([&] { *out = dup_string(b->b.to_json()); });
}

ratnet_status ratnet_bary_from_json(const char* json, ratnet_bary** out) {
  if (!json || !out) return bad_argument("bary_from_json: null argument");
  return guarded([&] {
    *out = new ratnet_bary{ratnet::aaa::BarycentricRational::from_json(json)};
  });
}

void ratnet_bary_free(ratnet_bary* b) { delete b; }

/* ---------------- rational ---------------- */

ratnet_status ratnet_rational_eval(const ratnet_rational* r,
                                   const double* point, int dim, double* out) {
  if (!r || !point || !out || dim < 1)
    return bad_argument("rational_eval: null argument");
  return guarded([&] {
    *out = r->r.eval(
        std::span<const double>(point, static_cast<std::size_t>(dim)));
  });
}

ratnet_status ratnet_rational_uniform_error(const ratnet_rational* r,
                                            const ratnet_samples* s,
                                            double* out) {
  if (!r || !s || !out)
    return bad_argument("rational_uniform_error: null argument");
  return guarded([&] { *out = ratnet::diffcorr::uniform_error(r->r, s->s); });
}

ratnet_status ratnet_rational_to_json(const ratnet_rational* r, char** out) {
  if (!r || !out) return bad_argument("rational_to_json: null argument");
  return guarded([&] { *out = dup_string(r->r.to_json()); });
}

ratnet_status ratnet_rational_from_json(const char* json,
                                        ratnet_rational** out) {
  if (!json || !out) return bad_argument("rational_from_json: null argument");
  return guarded([&] {
    *out = new ratnet_rational{
        ratnet::basis::RationalApprox::from_json(json)};
  });
}

void ratnet_rational_free(ratnet_rational* r) { delete r; }

/* ---------------- reports ---------------- */

double ratnet_report_error(const ratnet_report* r) {
  return r ? r->fit.error : 0.0;
}

int ratnet_report_iterations(const ratnet_report* r) {
  return r ? r->fit.iterations : 0;
}

double ratnet_report_wall_time(const ratnet_report* r) {
  return r ? r->fit.wall_time : 0.0;
}

int ratnet_report_converged(const ratnet_report* r) {
  return r && r->fit.converged ? 1 : 0;
}

int ratnet_report_pole_flag(const ratnet_report* r) {
  if (!r) return 0;
  return (r->is_train ? r->train.pole_flag : r->fit.pole_flag) ? 1 : 0;
}

size_t ratnet_report_history_size(const ratnet_report* r) {
  if (!r) return 0;
  return r->is_train ? r->train.per_epoch_loss.size() : r->fit.history.size();
}

ratnet_status ratnet_report_history(const ratnet_report* r, double* buf,
                                    size_t cap) {
  if (!r || !buf) return bad_argument("report_history: null argument");
  const auto& h = r->is_train ? r->train.per_epoch_loss : r->fit.history;
  if (cap < h.size()) return bad_argument("report_history: buffer too small");
  std::memcpy(buf, h.data(), h.size() * sizeof(double));
  return RATNET_OK;
}

size_t ratnet_report_trace_size(const ratnet_report* r) {
  return r ? r->trace.size() : 0;
}

ratnet_status ratnet_report_trace(const ratnet_report* r, int* iteration,
                                  double* z_lo, double* z_hi, int* feasible,
                                  size_t cap) {
  if (!r) return bad_argument("report_trace: null handle");
  if (cap < r->trace.size())
    return bad_argument("report_trace: buffer too small");
  for (size_t i = 0; i < r->trace.size(); ++i) {
    if (iteration) iteration[i] = r->trace[i].iteration;
    if (z_lo) z_lo[i] = r->trace[i].z_lo;
    if (z_hi) z_hi[i] = r->trace[i].z_hi;
    if (feasible) feasible[i] = r->trace[i].feasible ? 1 : 0;
  }
  return RATNET_OK;
}

double ratnet_report_final_loss(const ratnet_report* r) {
  return r && r->is_train ? r->train.final_loss : 0.0;
}

double ratnet_report_min_loss(const ratnet_report* r) {
  return r && r->is_train ? r->train.min_loss : 0.0;
}

int ratnet_report_min_loss_epoch(const ratnet_report* r) {
  return r && r->is_train ? r->train.min_loss_epoch : 0;
}

double ratnet_report_epoch_time(const ratnet_report* r) {
  return r && r->is_train ? r->train.wall_time_per_epoch : 0.0;
}

void ratnet_report_free(ratnet_report* r) { delete r; }

/* ---------------- nn ---------------- */

ratnet_train_config ratnet_train_config_default(void) {
  ratnet_train_config c{};
  c.loss = 1;       /* uniform */
  c.optimizer = -1; /* by loss */
  c.mode = 0;
  c.epochs = 200;
  c.lr = 1e-2;
  c.seed = 1;
  return c;
}

ratnet_status ratnet_mlp_init(int hidden, ratnet_activation act,
                              uint64_t seed, ratnet_mlp** out) {
  if (!out) return bad_argument("mlp_init: null output");
  return guarded([&] {
    ratnet::nn::ActivationSpec spec;
    switch (act) {
      case RATNET_ACT_RELU:
        spec = ratnet::nn::relu_activation();
        break;
      case RATNET_ACT_RATIONAL_FIXED:
        spec = ratnet::nn::relu_rational_activation(
            ratnet::nn::Activation::FixedRational);
        break;
      case RATNET_ACT_RATIONAL_LEARNABLE:
        spec = ratnet::nn::relu_rational_activation(
            ratnet::nn::Activation::LearnableRational);
        break;
      default:
        throw ratnet::DomainError("mlp_init: unknown activation");
    }
    *out = new ratnet_mlp{ratnet::nn::init_params(hidden, spec, seed)};
  });
}

ratnet_status ratnet_mlp_forward(const ratnet_mlp* m, double x, double* out) {
  if (!m || !out) return bad_argument("mlp_forward: null argument");
  return guarded([&] { *out = ratnet::nn::forward(m->p, x); });
}

ratnet_status ratnet_train(ratnet_mlp* m, const ratnet_samples* s,
                           const ratnet_train_config* cfg,
                           ratnet_report** report) {
  if (!m || !s) return bad_argument("train: null argument");
  return guarded([&] {
    ratnet::nn::TrainConfig c;
    if (cfg) {
      c.loss = cfg->loss == 0 ? ratnet::nn::Loss::MSE
                              : ratnet::nn::Loss::Uniform;
      if (cfg->optimizer == 0) c.optimizer = ratnet::nn::Optimizer::Adam;
      if (cfg->optimizer == 1) c.optimizer = ratnet::nn::Optimizer::Adamax;
      c.mode = cfg->mode == 1 ? ratnet::nn::TrainMode::Split
                              : ratnet::nn::TrainMode::Standard;
      c.epochs = cfg->epochs;
      c.lr = cfg->lr;
      c.seed = cfg->seed;
    }
    auto rep = ratnet::nn::train(m->p, s->s, c);
    if (report) {
      auto* r = new ratnet_report;
      r->train = std::move(rep);
      r->is_train = true;
      r->fit.error = r->train.final_loss;
      r->fit.iterations = static_cast<int>(r->train.per_epoch_loss.size());
      r->fit.wall_time = r->train.wall_time_per_epoch *
                         static_cast<double>(r->train.per_epoch_loss.size());
      *report = r;
    }
  });
}

ratnet_status ratnet_mlp_loss(const ratnet_mlp* m, const ratnet_samples* s,
                              int loss, double* out) {
  if (!m || !s || !out) return bad_argument("mlp_loss: null argument");
  return guarded([&] {
    *out = ratnet::nn::loss(
        m->p, s->s,
        loss == 0 ? ratnet::nn::Loss::MSE : ratnet::nn::Loss::Uniform);
  });
}

void ratnet_mlp_free(ratnet_mlp* m) { delete m; }

void ratnet_string_free(char* s) { delete[] s; }

}  // extern "C"
