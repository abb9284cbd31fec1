#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "splam/metrics.hpp"
#include "splam/parallel.hpp"
#include "splam/solvers.hpp"

namespace splam {

/// Theorem 1's prescribed mixing parameter, (1 + sqrt 6) / (1 + 2 sqrt 6).
inline double theory_alpha() {
  static const double v = (1.0 + std::sqrt(6.0)) / (1.0 + 2.0 * std::sqrt(6.0));
  return v;
}

/// Theorem 1's prescribed regularization level 2 (1 + 2 sqrt 6) sigma
/// sqrt(log p / N).
inline double theory_lambda(double sigma, int p, Eigen::Index n) {
  return 2.0 * (1.0 + 2.0 * std::sqrt(6.0)) * sigma *
         std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
}

/// {0.05, 0.10, ..., 0.95, 1.0}
inline std::vector<double> default_alpha_grid() {
  std::vector<double> g;
  g.reserve(20);
  for (int k = 1; k <= 19; ++k) g.push_back(0.05 * k);
  g.push_back(1.0);
  return g;
}

namespace detail {

/// Per-block gradients at the (intercept-adjusted) zero coefficient vector.
inline std::vector<Vec> gradients_at_zero(const Problem& prob) {
  BlockCoefficients zero = BlockCoefficients::zeros_like(*prob.blocks);
  if (prob.loss == LossKind::logistic) zero.intercept = prob.intercept0;
  const Vec u = prob.linear_predictor(zero);
  const Vec w = prob.negative_loss_derivative(u);
  std::vector<Vec> g(static_cast<std::size_t>(prob.n_blocks()));
  for (int j = 0; j < prob.n_blocks(); ++j) {
    g[static_cast<std::size_t>(j)] = prob.block_gradient_from_residual(w, j);
  }
  return g;
}

}  // namespace detail

/// max_j ||grad_j L(0)||_2 / alpha; zero is guaranteed optimal for any
/// lambda at or above this value.
inline double lambda_init(const Problem& prob, double alpha) {
  if (alpha <= 0.0)
    throw std::invalid_argument("no finite lambda zeroes all blocks when alpha is 0");
  double max_norm = 0.0;
  for (const auto& g : detail::gradients_at_zero(prob)) max_norm = std::max(max_norm, g.norm());
  return max_norm / alpha;
}

/// Binary search for the smallest lambda whose prox-gradient step from zero
/// (step 1/C) is still zero for every block. eps_rel scales the bracket
/// width relative to lambda_init.
inline double lambda_max(const Problem& prob, double alpha, double eps_rel = 1e-4) {
  const double li = lambda_init(prob, alpha);
  if (li == 0.0) return 0.0;
  const double t = 1.0 / std::max(global_lipschitz(prob), 1e-12);
  std::vector<Vec> steps = detail::gradients_at_zero(prob);
  for (auto& g : steps) g *= -t;  // 0 - t grad
  const auto all_zero = [&](double lambda) {
    for (const auto& g : steps) {
      if (!prox_block(g, t * lambda * alpha, t * lambda * (1.0 - alpha)).isZero(0.0)) return false;
    }
    return true;
  };
  double lo = 0.0, hi = li;
  const double eps = eps_rel * li;
  while (hi - lo >= eps) {
    const double mid = 0.5 * (lo + hi);
    if (all_zero(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

/// Warm-started solution path over one alpha: lambdas log-spaced from
/// lambda_max down to lambda_max * lambda_min_ratio.
struct PathResult {
  double alpha = 1.0;
  std::vector<double> lambdas;
  std::vector<FitResult> fits;
};

inline PathResult fit_path(const Problem& prob, double alpha, int n_lambda = 100,
                           double lambda_min_ratio = 1e-3, SolverConfig cfg = {}) {
  if (n_lambda < 2) throw std::invalid_argument("fit_path needs at least 2 lambdas");
  PathResult out;
  out.alpha = alpha;
  const double lmax = lambda_max(prob, alpha);
  out.lambdas.resize(static_cast<std::size_t>(n_lambda));
  for (int i = 0; i < n_lambda; ++i) {
    out.lambdas[static_cast<std::size_t>(i)] =
        lmax * std::pow(lambda_min_ratio, static_cast<double>(i) / (n_lambda - 1));
  }
  out.fits.reserve(static_cast<std::size_t>(n_lambda));
  const BlockCoefficients* warm = nullptr;
  for (int i = 0; i < n_lambda; ++i) {
    out.fits.push_back(
        fit(prob, PenaltyParams(out.lambdas[static_cast<std::size_t>(i)], alpha), cfg, warm));
    warm = &out.fits.back().coef;
  }
  return out;
}

/// Validation score of one fit: RMSE for quadratic, misclassification rate
/// for logistic. `val_blocks` must come from the same transform as the
/// training design.
inline double validation_score(const std::vector<Mat>& val_blocks, const Vec& val_y,
                               const Problem& train_prob, const BlockCoefficients& coef) {
  if (val_y.size() == 0) throw std::invalid_argument("empty validation set");
  const double offset =
      train_prob.loss == LossKind::quadratic ? train_prob.y_offset : coef.intercept;
  Vec u = Vec::Constant(val_y.size(), offset);
  for (std::size_t j = 0; j < val_blocks.size(); ++j) {
    const auto& b = coef.blocks[j];
    if (b.size() > 0 && !b.isZero(0.0)) u.noalias() += val_blocks[j] * b;
  }
  return train_prob.loss == LossKind::quadratic ? rmse(u, val_y) : misclass(u, val_y);
}

/// Standard error of a validation score estimate: delta method on the mean
/// squared error for RMSE, binomial for the misclassification rate.
inline double validation_score_se(double score, Eigen::Index n_val, LossKind loss) {
  const double n = static_cast<double>(n_val);
  if (loss == LossKind::quadratic) return score / std::sqrt(2.0 * n);
  return std::sqrt(std::max(score * (1.0 - score), 1.0 / n) / n);
}

/// Paths over a (lambda, alpha) grid with per-cell validation scores and the
/// selected pair. Ties go to the larger lambda, then the larger alpha.
struct PathGrid {
  std::vector<PathResult> paths;                  // one per alpha
  std::vector<std::vector<double>> scores;        // [alpha][lambda]
  int selected_alpha = -1, selected_lambda = -1;  // indices

  const FitResult& selected_fit() const {
    return paths[static_cast<std::size_t>(selected_alpha)]
        .fits[static_cast<std::size_t>(selected_lambda)];
  }
  double selected_alpha_value() const {
    return paths[static_cast<std::size_t>(selected_alpha)].alpha;
  }
  double selected_lambda_value() const {
    return paths[static_cast<std::size_t>(selected_alpha)]
        .lambdas[static_cast<std::size_t>(selected_lambda)];
  }
  double selected_score() const {
    return scores[static_cast<std::size_t>(selected_alpha)]
        [static_cast<std::size_t>(selected_lambda)];
  }
};

inline void select_model(PathGrid& grid) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < grid.paths.size(); ++a) {
    const auto& path = grid.paths[a];
    for (std::size_t i = 0; i < path.fits.size(); ++i) {
      const double score = grid.scores[a][i];
      bool take = score < best;
      if (!take && score == best && grid.selected_alpha >= 0) {
        const double cur_l = grid.selected_lambda_value();
        const double cur_a = grid.selected_alpha_value();
        take = path.lambdas[i] > cur_l || (path.lambdas[i] == cur_l && path.alpha > cur_a);
      }
      if (take) {
        best = score;
        grid.selected_alpha = static_cast<int>(a);
        grid.selected_lambda = static_cast<int>(i);
      }
    }
  }
}

/// One-standard-error selection: among cells whose score is within one
/// standard error of the validation minimum, take the most parsimonious
/// model (fewest active features, then fewest nonlinear ones), breaking
/// remaining ties toward larger lambda then larger alpha. The plain minimum
/// tracks prediction error so closely that it keeps clusters of noise
/// features with tiny coefficients; this is the standard parsimony-preferring
/// refinement.
inline void select_model_one_se(PathGrid& grid, Eigen::Index n_val, LossKind loss) {
  select_model(grid);
  if (grid.selected_alpha < 0) return;
  const double threshold =
      grid.selected_score() + validation_score_se(grid.selected_score(), n_val, loss);
  int best_support = std::numeric_limits<int>::max();
  int best_nonlinear = std::numeric_limits<int>::max();
  double best_lambda = -1.0, best_alpha = -1.0;
  int sel_a = grid.selected_alpha, sel_l = grid.selected_lambda;
  for (std::size_t a = 0; a < grid.paths.size(); ++a) {
    const auto& path = grid.paths[a];
    for (std::size_t i = 0; i < path.fits.size(); ++i) {
      if (grid.scores[a][i] > threshold) continue;
      const auto& fr = path.fits[i];
      const int support = fr.support_size();
      const int nonlinear = fr.count_status(FeatureStatus::nonlinear);
      const bool take = support != best_support      ? support < best_support
                        : nonlinear != best_nonlinear ? nonlinear < best_nonlinear
                        : path.lambdas[i] != best_lambda ? path.lambdas[i] > best_lambda
                                                         : path.alpha > best_alpha;
      if (take) {
        best_support = support;
        best_nonlinear = nonlinear;
        best_lambda = path.lambdas[i];
        best_alpha = path.alpha;
        sel_a = static_cast<int>(a);
        sel_l = static_cast<int>(i);
      }
    }
  }
  grid.selected_alpha = sel_a;
  grid.selected_lambda = sel_l;
}

enum class SelectionRule { min_validation, one_se };

/// Fits one path per alpha (in parallel), scores every cell on the
/// validation blocks, and selects the winner under the given rule.
inline PathGrid fit_path_grid(const Problem& prob, const std::vector<double>& alphas,
                              const std::vector<Mat>& val_blocks, const Vec& val_y,
                              int n_lambda = 100, double lambda_min_ratio = 1e-3,
                              SolverConfig cfg = {}, int workers = 1,
                              SelectionRule rule = SelectionRule::min_validation) {
  PathGrid grid;
  grid.paths.resize(alphas.size());
  grid.scores.resize(alphas.size());
  parallel_for(alphas.size(), workers, [&](std::size_t a) {
    grid.paths[a] = fit_path(prob, alphas[a], n_lambda, lambda_min_ratio, cfg);
    auto& scores = grid.scores[a];
    scores.resize(grid.paths[a].fits.size());
    for (std::size_t i = 0; i < grid.paths[a].fits.size(); ++i) {
      scores[i] = validation_score(val_blocks, val_y, prob, grid.paths[a].fits[i].coef);
    }
  });
  if (rule == SelectionRule::one_se) {
    select_model_one_se(grid, val_y.size(), prob.loss);
  } else {
    select_model(grid);
  }
  return grid;
}

}  // namespace splam
