#include "ratnet/lp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <ostream>

namespace ratnet::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOptTol = 1e-9;     // reduced-cost tolerance
constexpr double kFeasTol = 1e-9;    // ratio-test pivot tolerance
constexpr double kPhase1Tol = 1e-8;  // infeasibility threshold
constexpr double kArtPivotTol = 1e-7;
constexpr int kRefactorEvery = 64;

// Extended precision for all internal simplex arithmetic. The feasibility
// subproblems of rational fitting put near-antiparallel row pairs into the
// basis (the two residual rows of an active sample differ by O(z)), so
// working bases reach condition numbers around 1/z^2; 80-bit arithmetic
// keeps the multipliers meaningful there.
using Real = long double;
using MatR = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
using VecR = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// Deterministic hash of an index onto (0,1); used for the anti-degeneracy
// perturbation below.
double hash01(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  x ^= x >> 31;
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

// The primal has few columns and many rows, so we run the simplex on the
// dual:  min beta'lambda  s.t.  W lambda = g,  lambda >= 0,
// with W = Arows', g = -c, beta = brows. The dual basis is n x n and the
// simplex multipliers at dual optimality are exactly the primal solution y.
//
// The dual RHS g carries a tiny deterministic perturbation, scaled by
// |c|_inf, so basic solutions stay nondegenerate and the simplex cannot
// stall on ties (Charnes-style regularization). The perturbation shifts the
// returned vertex by O(1e-11) relative; objective values are reported
// against the unperturbed cost.
class DualSimplex {
 public:
  DualSimplex(const Eigen::MatrixXd& arows, const Eigen::VectorXd& brows,
              const Eigen::VectorXd& c, long max_iters)
      : A_(arows.cast<Real>()),
        beta_(brows.cast<Real>()),
        g_((-c).cast<Real>()),
        n_(c.size()),
        m_(arows.rows()),
        max_iters_(max_iters) {
    const double scale = std::max(c.cwiseAbs().maxCoeff(), 1e-3);
    for (Eigen::Index r = 0; r < n_; ++r)
      g_[r] += static_cast<Real>(1e-11 * scale *
                                 (0.5 + hash01(static_cast<std::uint64_t>(r))));
  }

  enum class Outcome { Optimal, DualUnbounded, DualInfeasible };

  Outcome run() {
    basis_.resize(n_);
    for (Eigen::Index r = 0; r < n_; ++r) basis_[r] = m_ + r;
    art_sign_ = VecR::Ones(n_);
    for (Eigen::Index r = 0; r < n_; ++r)
      if (g_[r] < 0.0) art_sign_[r] = -1.0;
    binv_ = art_sign_.asDiagonal();
    xb_ = g_.cwiseAbs();
    in_basis_.assign(m_, 0);
    rejected_.assign(m_, 0);

    phase_ = 1;
    if (!iterate())
      throw NumericalError("lp: phase-1 breakdown (bounded objective ray)");
    if (phase1_objective() > kPhase1Tol) return Outcome::DualInfeasible;
    for (Eigen::Index r = 0; r < n_; ++r)
      if (basis_[r] >= m_) xb_[r] = 0.0;

    phase_ = 2;
    if (!iterate()) return Outcome::DualUnbounded;
    return Outcome::Optimal;
  }

  Eigen::VectorXd primal_solution() const {
    return multipliers().cast<double>();
  }
  long iterations() const { return iters_; }

 private:
  Real cost(Eigen::Index col) const {
    if (phase_ == 1) return col >= m_ ? 1.0 : 0.0;
    return col >= m_ ? Real(0) : beta_[col];
  }

  VecR basic_costs() const {
    VecR cb(n_);
    for (Eigen::Index r = 0; r < n_; ++r) cb[r] = cost(basis_[r]);
    return cb;
  }

  VecR multipliers() const { return binv_.transpose() * basic_costs(); }

  double phase1_objective() const {
    Real s = 0.0;
    for (Eigen::Index r = 0; r < n_; ++r)
      if (basis_[r] >= m_) s += xb_[r];
    return static_cast<double>(s);
  }

  VecR column(Eigen::Index col) const {
    if (col >= m_) {
      VecR e = VecR::Zero(n_);
      e[col - m_] = art_sign_[col - m_];
      return e;
    }
    return A_.row(col).transpose();
  }

  void refactorize() {
    MatR b(n_, n_);
    for (Eigen::Index r = 0; r < n_; ++r) b.col(r) = column(basis_[r]);
    Eigen::PartialPivLU<MatR> lu(b);
    binv_ = lu.inverse();
    std::fill(rejected_.begin(), rejected_.end(), 0);
    xb_ = binv_ * g_;
    for (Eigen::Index r = 0; r < n_; ++r) {
      if (xb_[r] < 0.0 && xb_[r] > -1e-7) xb_[r] = 0.0;
      if (basis_[r] >= m_ && phase_ == 2) xb_[r] = 0.0;
    }
  }

  // Returns false on (dual) unboundedness; true once phase-optimal.
  bool iterate() {
    bool bland = false;
    long degen_streak = 0;
    int since_refactor = 0;
    VecR pi, red, d;

    // Objective-progress watchdog: once improvements sink below noise for a
    // full window of pivots, the basis is reverified; pivoting on after
    // that would only churn on ties.
    const long progress_window = 20 * n_ + 200;
    Real watched_obj = std::numeric_limits<Real>::infinity();
    long last_progress = 0;

    while (true) {
      if (iters_ >= max_iters_)
        throw NumericalError("lp: simplex stalled after " +
                             std::to_string(iters_) + " iterations");
      {
        Real obj = 0.0;
        for (Eigen::Index r = 0; r < n_; ++r) obj += cost(basis_[r]) * xb_[r];
        if (obj < watched_obj -
                      Real(1e-10) * (Real(1) + std::abs(double(obj)))) {
          watched_obj = obj;
          last_progress = iters_;
        } else if (iters_ - last_progress > progress_window) {
          // No objective progress for a full window: accept the basis only
          // if a fresh factorization certifies near-optimality.
          refactorize();
          pi = multipliers();
          red = -(A_ * pi);
          if (phase_ == 2) red += beta_;
          Real worst = 0.0;
          for (Eigen::Index j = 0; j < m_; ++j)
            if (!in_basis_[j]) worst = std::min(worst, red[j]);
          if (worst >= Real(-1e-6)) return true;
          throw NumericalError(
              "lp: simplex stalled without progress (worst reduced cost " +
              std::to_string(static_cast<double>(worst)) + ")");
        }
      }

      pi = multipliers();
      red = -(A_ * pi);
      if (phase_ == 2) red += beta_;

      Eigen::Index enter = -1;
      while (true) {
        enter = -1;
        Real best = -kOptTol;
        for (Eigen::Index j = 0; j < m_; ++j) {
          if (in_basis_[j] || rejected_[j]) continue;
          if (red[j] < best) {
            if (bland) {
              enter = j;  // first negative index
              break;
            }
            best = red[j];
            enter = j;
          }
        }
        if (enter < 0) break;
        d = binv_ * column(enter);
        // A direction blowing up against the current basis signals a
        // nearly dependent column; leave it out of this pricing round.
        if (d.cwiseAbs().maxCoeff() >
            Real(1e7) *
                std::max(Real(1), column(enter).cwiseAbs().maxCoeff())) {
          rejected_[enter] = 1;
          continue;
        }
        break;
      }
      if (enter < 0) {
        // Confirm with a fresh factorization before accepting optimality.
        if (since_refactor > 0) {
          refactorize();
          since_refactor = 0;
          continue;
        }
        return true;
      }

      Eigen::Index leave = -1;
      Real theta = std::numeric_limits<Real>::infinity();
      bool leave_is_art = false;
      for (Eigen::Index r = 0; r < n_; ++r) {
        const bool art = basis_[r] >= m_;
        Real ratio;
        if (phase_ == 2 && art) {
          // Stuck artificials pin redundant dual equalities; they may pivot
          // out on either sign but must never grow.
          if (std::abs(double(d[r])) <= kArtPivotTol) continue;
          ratio = 0.0;
        } else {
          if (d[r] <= Real(kFeasTol)) continue;
          ratio = std::max(xb_[r], Real(0)) / d[r];
        }
        bool better;
        if (leave < 0) {
          better = true;
        } else if (ratio < theta - Real(1e-18)) {
          better = true;
        } else if (ratio <= theta + Real(1e-18)) {
          // Tie: prefer evicting artificials, then the largest pivot
          // element (keeps the basis well conditioned), then the smallest
          // index for determinism.
          if (art != leave_is_art)
            better = art;
          else if (std::abs(std::abs(d[r]) - std::abs(d[leave])) >
                   Real(1e-15))
            better = std::abs(d[r]) > std::abs(d[leave]);
          else
            better = basis_[r] < basis_[leave];
        } else {
          better = false;
        }
        if (better) {
          theta = ratio;
          leave = r;
          leave_is_art = art;
        }
      }
      if (leave < 0) return false;  // dual unbounded along entering column

      // Pivot: basis[leave] <- enter, rank-one update of the inverse.
      const Real piv = d[leave];
      xb_ -= theta * d;
      xb_[leave] = theta;
      for (Eigen::Index r = 0; r < n_; ++r)
        if (xb_[r] < 0.0) xb_[r] = 0.0;
      if (basis_[leave] < m_) in_basis_[basis_[leave]] = 0;
      in_basis_[enter] = 1;
      basis_[leave] = enter;
      std::fill(rejected_.begin(), rejected_.end(), 0);
      const Eigen::Matrix<Real, 1, Eigen::Dynamic> pivot_row =
          binv_.row(leave) / piv;
      for (Eigen::Index r = 0; r < n_; ++r) {
        if (r == leave) continue;
        const Real f = d[r];
        if (f != 0.0) binv_.row(r).noalias() -= f * pivot_row;
      }
      binv_.row(leave) = pivot_row;

      ++iters_;
      degen_streak = theta <= Real(1e-12) ? degen_streak + 1 : 0;
      if (degen_streak > 10 * n_) bland = true;
      if (++since_refactor >= kRefactorEvery) {
        refactorize();
        since_refactor = 0;
      }
    }
  }

  MatR A_;  // m x n, rows are dual columns
  VecR beta_, g_, art_sign_, xb_;
  MatR binv_;
  std::vector<Eigen::Index> basis_;
  std::vector<char> in_basis_;
  std::vector<char> rejected_;
  Eigen::Index n_, m_;
  int phase_ = 1;
  long iters_ = 0;
  long max_iters_;
};

// Fold finite box bounds into inequality rows so all variables become free.
void augment_with_bounds(const Problem& p, Eigen::MatrixXd& arows,
                         Eigen::VectorXd& brows) {
  const Eigen::Index n = p.c.size();
  Eigen::Index extra = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isfinite(p.hi[j])) ++extra;
    if (std::isfinite(p.lo[j])) ++extra;
  }
  arows.setZero(p.A.rows() + extra, n);
  brows.resize(p.A.rows() + extra);
  arows.topRows(p.A.rows()) = p.A;
  brows.head(p.A.rows()) = p.b;
  Eigen::Index r = p.A.rows();
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::isfinite(p.hi[j])) {
      arows(r, j) = 1.0;
      brows[r] = p.hi[j];
      ++r;
    }
    if (std::isfinite(p.lo[j])) {
      arows(r, j) = -1.0;
      brows[r] = -p.lo[j];
      ++r;
    }
  }
}

Solution solve_impl(const Problem& p, const Options& opts, bool is_probe);

// Primal feasibility probe: min t s.t. Ay - t <= b, t >= 0. Bounded and
// always feasible, so it distinguishes Unbounded from Infeasible.
bool primal_feasible(const Eigen::MatrixXd& arows,
                     const Eigen::VectorXd& brows) {
  const Eigen::Index m = arows.rows(), n = arows.cols();
  Problem probe = make_problem(m, n + 1);
  probe.A.leftCols(n) = arows;
  probe.A.col(n).setConstant(-1.0);
  probe.b = brows;
  probe.c[n] = 1.0;
  probe.lo[n] = 0.0;
  Solution s = solve_impl(probe, {}, true);
  return s.status == Status::Optimal && s.objective <= kPhase1Tol;
}

Solution solve_impl(const Problem& p, const Options& opts, bool is_probe) {
  p.validate();

  Eigen::MatrixXd arows;
  Eigen::VectorXd brows;
  augment_with_bounds(p, arows, brows);
  const Eigen::Index n = p.c.size();
  const Eigen::Index m = arows.rows();

  Solution sol;
  if (m == 0) {
    if (p.c.isZero(0.0)) {
      sol.status = Status::Optimal;
      sol.y = Eigen::VectorXd::Zero(n);
      sol.objective = 0.0;
    } else {
      sol.status = Status::Unbounded;
    }
    return sol;
  }

  const long cap =
      opts.max_iters > 0 ? opts.max_iters : 50 * static_cast<long>(m + n);
  DualSimplex simplex(arows, brows, p.c, cap);
  const auto outcome = simplex.run();
  sol.iterations = simplex.iterations();

  switch (outcome) {
    case DualSimplex::Outcome::Optimal: {
      sol.y = simplex.primal_solution();
      sol.objective = p.c.dot(sol.y);
      sol.status = Status::Optimal;
      const double viol = (arows * sol.y - brows).maxCoeff();
      if (viol > 1e-7)
        throw NumericalError("lp: optimal basis failed feasibility check (" +
                             std::to_string(viol) + ")");
      return sol;
    }
    case DualSimplex::Outcome::DualUnbounded:
      sol.status = Status::Infeasible;
      return sol;
    case DualSimplex::Outcome::DualInfeasible:
      if (is_probe)
        throw NumericalError("lp: feasibility probe unexpectedly unbounded");
      sol.status = primal_feasible(arows, brows) ? Status::Unbounded
                                                 : Status::Infeasible;
      return sol;
  }
  throw NumericalError("lp: unreachable");
}

void maybe_dump(const Problem& p) {
  const char* path = std::getenv("RATNET_LP_DUMP");
  if (!path || !*path) return;
  std::ofstream os(path, std::ios::app);
  if (os) dump(p, os);
}

}  // namespace

void Problem::validate() const {
  const Eigen::Index n = c.size();
  if (n == 0) throw DomainError("lp: no variables");
  if (A.cols() != n || b.size() != A.rows() || lo.size() != n ||
      hi.size() != n)
    throw DomainError("lp: dimension mismatch between c, A, b and bounds");
  if (!c.allFinite() || !A.allFinite() || !b.allFinite())
    throw DomainError("lp: entries must be finite");
  for (Eigen::Index j = 0; j < n; ++j)
    if (std::isnan(lo[j]) || std::isnan(hi[j]) || lo[j] > hi[j])
      throw DomainError("lp: invalid bounds on variable " + std::to_string(j));
}

Problem make_problem(std::size_t rows, std::size_t cols) {
  Problem p;
  p.c = Eigen::VectorXd::Zero(cols);
  p.A = Eigen::MatrixXd::Zero(rows, cols);
  p.b = Eigen::VectorXd::Zero(rows);
  p.lo = Eigen::VectorXd::Constant(cols, -kInf);
  p.hi = Eigen::VectorXd::Constant(cols, kInf);
  return p;
}

Solution solve(const Problem& p, const Options& opts) {
  maybe_dump(p);
  return solve_impl(p, opts, false);
}

void dump(const Problem& p, std::ostream& os) {
  os.precision(17);
  os << "lp rows=" << p.A.rows() << " cols=" << p.c.size() << "\n";
  os << "minimize:";
  for (Eigen::Index j = 0; j < p.c.size(); ++j) os << " " << p.c[j];
  os << "\n";
  for (Eigen::Index i = 0; i < p.A.rows(); ++i) {
    os << "row " << i << ":";
    for (Eigen::Index j = 0; j < p.A.cols(); ++j) os << " " << p.A(i, j);
    os << " <= " << p.b[i] << "\n";
  }
  os << "bounds:\n";
  for (Eigen::Index j = 0; j < p.c.size(); ++j)
    os << "  var " << j << ": [" << p.lo[j] << ", " << p.hi[j] << "]\n";
  os << "end\n";
}

}  // namespace ratnet::lp
