#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "splam/objective.hpp"
#include "splam/prox.hpp"

namespace splam {

enum class Algorithm { ista, fista, bcgd, bcd };

inline Algorithm default_algorithm(LossKind loss) {
  return loss == LossKind::quadratic ? Algorithm::bcd : Algorithm::bcgd;
}

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::ista: return "ista";
    case Algorithm::fista: return "fista";
    case Algorithm::bcgd: return "bcgd";
    case Algorithm::bcd: return "bcd";
  }
  return "?";
}

struct SolverConfig {
  Algorithm algorithm = Algorithm::bcd;
  double tolerance = 1e-7;  // relative objective change per sweep
  int max_sweeps = 10000;
  double backtrack_shrink = 0.5;     // eta
  double initial_step_scale = 10.0;  // t_j^0 = scale / C_j
  bool active_set = true;
};

enum class FeatureStatus { zero, linear, nonlinear };

inline const char* status_name(FeatureStatus s) {
  switch (s) {
    case FeatureStatus::zero: return "zero";
    case FeatureStatus::linear: return "linear";
    case FeatureStatus::nonlinear: return "nonlinear";
  }
  return "?";
}

inline FeatureStatus feature_status(const Vec& block) {
  if (block.size() == 0 || block.isZero(0.0)) return FeatureStatus::zero;
  if (block.size() == 1 || block.tail(block.size() - 1).isZero(0.0)) return FeatureStatus::linear;
  return FeatureStatus::nonlinear;
}

/// Number of increases in an objective trace beyond the 1e-12 slack.
inline int monotonicity_violations(const std::vector<double>& trace) {
  int v = 0;
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i] > trace[i - 1] + 1e-12 * std::max(1.0, std::abs(trace[i - 1]))) ++v;
  }
  return v;
}

struct FitResult {
  BlockCoefficients coef;
  std::vector<double> objective_trace;  // trace[0] is the starting objective
  int sweeps = 0;
  bool converged = false;
  std::vector<FeatureStatus> status;
  std::vector<int> active_set;
  int backtracks = 0;  // BCGD step-size shrinks taken

  double final_objective() const { return objective_trace.back(); }
  int support_size() const {
    int s = 0;
    for (auto st : status)
      if (st != FeatureStatus::zero) ++s;
    return s;
  }
  int count_status(FeatureStatus which) const {
    int s = 0;
    for (auto st : status)
      if (st == which) ++s;
    return s;
  }
};

namespace detail {

inline bool moved(const Vec& a, const Vec& b) { return !(a - b).isZero(0.0); }

class Solver {
 public:
  Solver(const Problem& prob, const PenaltyParams& pen, const SolverConfig& cfg,
         const BlockCoefficients* warm)
      : prob_(prob), pen_(pen), cfg_(cfg) {
    const int p = prob.n_blocks();
    if (cfg.algorithm == Algorithm::bcd && prob.loss != LossKind::quadratic)
      throw std::invalid_argument("bcd requires quadratic loss");
    if (warm != nullptr) {
      if (static_cast<int>(warm->blocks.size()) != p)
        throw std::invalid_argument("warm start has wrong block count");
      for (int j = 0; j < p; ++j) {
        if (warm->blocks[static_cast<std::size_t>(j)].size() != prob.Q(j).cols())
          throw std::invalid_argument("warm start block size mismatch");
      }
      coef_ = *warm;
    } else {
      coef_ = BlockCoefficients::zeros_like(*prob.blocks);
      if (prob.loss == LossKind::logistic) coef_.intercept = prob.intercept0;
    }
    u_ = prob.linear_predictor(coef_);
    loss_ = prob.loss_from_predictor(u_);

    if (cfg.algorithm == Algorithm::bcgd) {
      block_lip_.resize(static_cast<std::size_t>(p));
      step_.resize(static_cast<std::size_t>(p));
      for (int j = 0; j < p; ++j) {
        const double c = block_lipschitz(prob, j);
        block_lip_[static_cast<std::size_t>(j)] = c;
        step_[static_cast<std::size_t>(j)] = c > 0.0 ? cfg.initial_step_scale / c : 1.0;
      }
    }
    // Slight inflation keeps 1/C a guaranteed-descent step even though the
    // power iteration converges to the top eigenvalue from below.
    const double c_global = std::max(global_lipschitz(prob) * (1.0 + 1e-8), 1e-12);
    t_global_ = 1.0 / c_global;
  }

  FitResult run() {
    trace_.push_back(objective());
    std::vector<int> all(static_cast<std::size_t>(prob_.n_blocks()));
    std::iota(all.begin(), all.end(), 0);

    bool converged = false;
    if (!cfg_.active_set) {
      converged = run_phase(all, cfg_.max_sweeps, all);
    } else {
      // Full sweep, iterate on the active set till convergence, one more
      // full sweep; stop once the set is stable and the full fixed-point
      // residual certifies optimality.
      full_sweep_once(all);
      for (int outer = 0; outer < 1000 && sweeps_ < cfg_.max_sweeps; ++outer) {
        const std::vector<int> active = support();
        run_phase(active, cfg_.max_sweeps - sweeps_, active);
        if (sweeps_ >= cfg_.max_sweeps) break;
        const double before = trace_.back();
        full_sweep_once(all);
        const double after = trace_.back();
        if (support() == active &&
            std::abs(before - after) <= cfg_.tolerance * std::max(1.0, std::abs(before)) &&
            prox_residual_inf(all) <= 10.0 * cfg_.tolerance) {
          converged = true;
          break;
        }
      }
    }

    FitResult out;
    out.coef = std::move(coef_);
    out.objective_trace = std::move(trace_);
    out.sweeps = sweeps_;
    out.converged = converged;
    out.backtracks = backtracks_;
    out.status.reserve(out.coef.blocks.size());
    for (const auto& b : out.coef.blocks) out.status.push_back(feature_status(b));
    for (int j = 0; j < static_cast<int>(out.status.size()); ++j) {
      if (out.status[static_cast<std::size_t>(j)] != FeatureStatus::zero)
        out.active_set.push_back(j);
    }
    return out;
  }

 private:
  double objective() const { return loss_ + penalty_value(coef_, pen_); }

  std::vector<int> support() const {
    std::vector<int> s;
    for (int j = 0; j < prob_.n_blocks(); ++j) {
      if (!coef_.block_is_zero(j)) s.push_back(j);
    }
    return s;
  }

  void reset_momentum() {
    if (cfg_.algorithm != Algorithm::fista) return;
    fista_prev_ = coef_;
    fista_prev_u_ = u_;
    theta_ = 1.0;
  }

  void full_sweep_once(const std::vector<int>& all) {
    reset_momentum();
    sweep(all);
    trace_.push_back(objective());
    ++sweeps_;
  }

  /// Iterates on `blocks` until the objective settles and the prox residual
  /// over `fp_blocks` certifies a fixed point.
  bool run_phase(const std::vector<int>& blocks, int budget, const std::vector<int>& fp_blocks) {
    reset_momentum();
    double prev = trace_.back();
    for (int s = 0; s < budget; ++s) {
      sweep(blocks);
      const double cur = objective();
      trace_.push_back(cur);
      ++sweeps_;
      if (std::abs(prev - cur) <= cfg_.tolerance * std::max(1.0, std::abs(prev)) &&
          prox_residual_inf(fp_blocks) <= 10.0 * cfg_.tolerance) {
        return true;
      }
      prev = cur;
    }
    return false;
  }

  void sweep(const std::vector<int>& blocks) {
    switch (cfg_.algorithm) {
      case Algorithm::ista: sweep_ista(blocks); break;
      case Algorithm::fista: sweep_fista(blocks); break;
      case Algorithm::bcgd: sweep_bcgd(blocks); break;
      case Algorithm::bcd: sweep_bcd(blocks); break;
    }
    if (prob_.loss == LossKind::logistic) intercept_step();
  }

  void sweep_ista(const std::vector<int>& blocks) {
    const Vec w = prob_.negative_loss_derivative(u_);
    const double t = t_global_;
    Vec du = Vec::Zero(prob_.n);
    bool any = false;
    for (int j : blocks) {
      auto& b = coef_.blocks[static_cast<std::size_t>(j)];
      if (b.size() == 0) continue;
      const Vec g = b + t * (prob_.Q(j).transpose() * w) / static_cast<double>(prob_.n);
      Vec z = prox_block(g, t * pen_.lambda1(), t * pen_.lambda2());
      if (moved(z, b)) {
        du.noalias() += prob_.Q(j) * (z - b);
        b = std::move(z);
        any = true;
      }
    }
    if (any) {
      u_ += du;
      loss_ = prob_.loss_from_predictor(u_);
    }
  }

  /// One accelerated step. coef_/u_ always hold the accepted iterate x; the
  /// extrapolated point is formed on the fly from the previous iterate.
  void sweep_fista(const std::vector<int>& blocks) {
    const double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta_ * theta_));
    const double omega = (theta_ - 1.0) / theta_next;
    BlockCoefficients y = coef_;
    Vec uy = u_ + omega * (u_ - fista_prev_u_);
    for (int j : blocks) {
      const auto js = static_cast<std::size_t>(j);
      if (y.blocks[js].size() == 0) continue;
      y.blocks[js] += omega * (coef_.blocks[js] - fista_prev_.blocks[js]);
    }
    y.intercept = coef_.intercept + omega * (coef_.intercept - fista_prev_.intercept);

    const Vec w = prob_.negative_loss_derivative(uy);
    const double t = t_global_;
    fista_prev_ = coef_;
    fista_prev_u_ = u_;
    Vec u_new = uy;
    for (int j : blocks) {
      const auto js = static_cast<std::size_t>(j);
      const Vec& yj = y.blocks[js];
      if (yj.size() == 0) continue;
      const Vec g = yj + t * (prob_.Q(j).transpose() * w) / static_cast<double>(prob_.n);
      Vec z = prox_block(g, t * pen_.lambda1(), t * pen_.lambda2());
      if (moved(z, yj)) u_new.noalias() += prob_.Q(j) * (z - yj);
      coef_.blocks[js] = std::move(z);
    }
    coef_.intercept = y.intercept;
    u_ = std::move(u_new);
    theta_ = theta_next;
    loss_ = prob_.loss_from_predictor(u_);
  }

  void sweep_bcgd(const std::vector<int>& blocks) {
    const double nd = static_cast<double>(prob_.n);
    for (int j : blocks) {
      const auto js = static_cast<std::size_t>(j);
      auto& b = coef_.blocks[js];
      if (b.size() == 0) continue;
      const Vec w = prob_.negative_loss_derivative(u_);
      const Vec grad = prob_.Q(j).transpose() * w / (-nd);
      const double floor = block_lip_[js] > 0.0 ? 1.0 / block_lip_[js] : step_[js];
      for (;;) {
        const double t = step_[js];
        const Vec g = b - t * grad;
        Vec z = prox_block(g, t * pen_.lambda1(), t * pen_.lambda2());
        const Vec d = z - b;
        if (d.isZero(0.0)) break;
        const Vec u_cand = u_ + prob_.Q(j) * d;
        const double loss_cand = prob_.loss_from_predictor(u_cand);
        const double bound = loss_ + grad.dot(d) + d.squaredNorm() / (2.0 * t);
        const bool at_floor = t <= floor * (1.0 + 1e-12);
        if (loss_cand <= bound + 1e-12 * (1.0 + std::abs(bound)) || at_floor) {
          b = std::move(z);
          u_ = u_cand;
          loss_ = loss_cand;
          break;
        }
        step_[js] = std::max(cfg_.backtrack_shrink * t, floor);
        ++backtracks_;
      }
    }
  }

  void sweep_bcd(const std::vector<int>& blocks) {
    const double nd = static_cast<double>(prob_.n);
    for (int j : blocks) {
      auto& b = coef_.blocks[static_cast<std::size_t>(j)];
      if (b.size() == 0) continue;
      // (1/N) Q_j^T r_j with r_j = y - u + Q_j b; block orthonormality turns
      // the (1/N) Q_j^T Q_j b term into b itself.
      const Vec g = b + prob_.Q(j).transpose() * (prob_.y - u_) / nd;
      Vec z = prox_block(g, pen_.lambda1(), pen_.lambda2());
      if (moved(z, b)) {
        u_.noalias() += prob_.Q(j) * (z - b);
        b = std::move(z);
      }
    }
    loss_ = prob_.loss_from_predictor(u_);
  }

  /// Guarded 1-D Newton step on the logistic intercept; the step is halved
  /// until the loss does not increase.
  void intercept_step() {
    const Vec w = prob_.negative_loss_derivative(u_);
    const double g = -w.mean();
    double h = 0.0;
    for (Eigen::Index i = 0; i < prob_.n; ++i) {
      const double s = splam::detail::sigmoid(prob_.y[i] * u_[i]);
      h += s * (1.0 - s);
    }
    h /= static_cast<double>(prob_.n);
    if (h < 1e-12 || g == 0.0) return;
    double delta = -g / h;
    for (int half = 0; half < 60; ++half) {
      const Vec u_cand = u_.array() + delta;
      const double cand = prob_.loss_from_predictor(u_cand);
      if (cand <= loss_ + 1e-15 * (1.0 + std::abs(loss_))) {
        coef_.intercept += delta;
        u_ = u_cand;
        loss_ = cand;
        return;
      }
      delta *= 0.5;
    }
  }

  double prox_residual_inf(const std::vector<int>& blocks) const {
    const Vec w = prob_.negative_loss_derivative(u_);
    const double t = t_global_;
    double r = 0.0;
    for (int j : blocks) {
      const auto& b = coef_.blocks[static_cast<std::size_t>(j)];
      if (b.size() == 0) continue;
      const Vec g = b + t * (prob_.Q(j).transpose() * w) / static_cast<double>(prob_.n);
      const Vec z = prox_block(g, t * pen_.lambda1(), t * pen_.lambda2());
      r = std::max(r, (z - b).lpNorm<Eigen::Infinity>());
    }
    if (prob_.loss == LossKind::logistic) r = std::max(r, t * std::abs(w.mean()));
    return r;
  }

  const Problem& prob_;
  PenaltyParams pen_;
  SolverConfig cfg_;
  BlockCoefficients coef_;
  Vec u_;
  double loss_ = 0.0;
  std::vector<double> trace_;
  int sweeps_ = 0;
  int backtracks_ = 0;
  std::vector<double> block_lip_;
  std::vector<double> step_;
  double t_global_ = 1.0;
  BlockCoefficients fista_prev_;
  Vec fista_prev_u_;
  double theta_ = 1.0;
};

}  // namespace detail

/// Solves Problem 1 at fixed (lambda, alpha). Non-convergence within the
/// sweep budget is reported through FitResult::converged, not thrown.
inline FitResult fit(const Problem& prob, const PenaltyParams& pen, const SolverConfig& cfg = {},
                     const BlockCoefficients* warm_start = nullptr) {
  detail::Solver solver(prob, pen, cfg, warm_start);
  return solver.run();
}

}  // namespace splam
