#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "splam/spline_basis.hpp"

namespace splam {

enum class LossKind { quadratic, logistic };

/// Coefficient vector partitioned into per-feature blocks, plus the
/// unpenalized intercept (used by the logistic loss; quadratic problems
/// carry their offset in Problem::y_offset instead).
struct BlockCoefficients {
  std::vector<Vec> blocks;
  double intercept = 0.0;

  static BlockCoefficients zeros_like(const std::vector<Mat>& design_blocks) {
    BlockCoefficients c;
    c.blocks.reserve(design_blocks.size());
    for (const auto& q : design_blocks) c.blocks.emplace_back(Vec::Zero(q.cols()));
    return c;
  }

  Eigen::Index total_size() const {
    Eigen::Index t = 0;
    for (const auto& b : blocks) t += b.size();
    return t;
  }

  bool block_is_zero(int j) const {
    const auto& b = blocks[static_cast<std::size_t>(j)];
    return b.size() == 0 || b.isZero(0.0);
  }
};

struct PenaltyParams {
  double lambda = 0.0;
  double alpha = 1.0;

  PenaltyParams() = default;
  PenaltyParams(double lambda_, double alpha_) : lambda(lambda_), alpha(alpha_) {
    if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    if (alpha < 0.0 || alpha > 1.0) throw std::invalid_argument("alpha must be in [0,1]");
  }

  double lambda1() const { return lambda * alpha; }          // whole-block level
  double lambda2() const { return lambda * (1.0 - alpha); }  // nonlinear level
};

namespace detail {

// log(1 + exp(-m)) with the +-30 linear-asymptote policy.
inline double logistic_term(double m) {
  if (m > 30.0) return 0.0;
  if (m < -30.0) return -m;
  return m >= 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
}

inline double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace detail

/// Largest eigenvalue of the full (1/N) X^T X by power iteration (the blocks
/// are never concatenated).
inline double top_gram_eigenvalue(const std::vector<Mat>& blocks, Eigen::Index n,
                                  int max_iter = 500, double tol = 1e-11) {
  Eigen::Index total = 0;
  for (const auto& q : blocks) total += q.cols();
  if (total == 0 || n == 0) return 0.0;
  Vec v(total);
  for (Eigen::Index i = 0; i < total; ++i) v[i] = 1.0 + 0.01 * std::sin(0.7 * static_cast<double>(i));
  v /= v.norm();
  double eig = 0.0;
  Vec xv(n);
  for (int it = 0; it < max_iter; ++it) {
    xv.setZero();
    Eigen::Index off = 0;
    for (const auto& q : blocks) {
      if (q.cols() > 0) xv.noalias() += q * v.segment(off, q.cols());
      off += q.cols();
    }
    Vec next(total);
    off = 0;
    for (const auto& q : blocks) {
      if (q.cols() > 0) next.segment(off, q.cols()) = q.transpose() * xv / static_cast<double>(n);
      off += q.cols();
    }
    const double next_eig = next.norm();
    if (next_eig == 0.0) return 0.0;
    next /= next_eig;
    const bool settled = std::abs(next_eig - eig) <= tol * std::max(1.0, eig);
    eig = next_eig;
    v = std::move(next);
    if (settled && it >= 8) break;
  }
  return eig;
}

/// One optimization instance: an immutable block design plus the response.
/// Quadratic responses are centered at construction (offset kept for
/// prediction); logistic responses must be exactly +-1 and get a closed-form
/// base-rate intercept as the cold-start point.
struct Problem {
  const std::vector<Mat>* blocks = nullptr;
  Eigen::Index n = 0;
  LossKind loss = LossKind::quadratic;
  Vec y;                    // centered for quadratic
  double y_offset = 0.0;    // quadratic: mean of the raw response
  double intercept0 = 0.0;  // logistic: intercept of the intercept-only model
  double gram_top_eig = -1.0;  // largest eigenvalue of (1/N) X^T X, cached

  Problem() = default;

  Problem(const std::vector<Mat>& design_blocks, LossKind kind, const Vec& response)
      : blocks(&design_blocks), loss(kind), y(response) {
    if (design_blocks.empty()) throw std::invalid_argument("no design blocks");
    n = design_blocks.front().rows();
    for (const auto& q : design_blocks) {
      if (q.rows() != n) throw std::invalid_argument("block row counts disagree");
    }
    if (y.size() != n) throw std::invalid_argument("response length mismatch");
    if (loss == LossKind::quadratic) {
      y_offset = y.mean();
      y.array() -= y_offset;
    } else {
      Eigen::Index pos = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (y[i] == 1.0) {
          ++pos;
        } else if (y[i] != -1.0) {
          throw std::invalid_argument("logistic responses must be exactly +1 or -1");
        }
      }
      const double nd = static_cast<double>(n);
      const double phat =
          std::min(nd / (nd + 1.0), std::max(1.0 / (nd + 1.0), static_cast<double>(pos) / nd));
      intercept0 = std::log(phat / (1.0 - phat));
    }
    gram_top_eig = top_gram_eigenvalue(design_blocks, n);
  }

  int n_blocks() const { return static_cast<int>(blocks->size()); }
  const Mat& Q(int j) const { return (*blocks)[static_cast<std::size_t>(j)]; }

  /// Linear predictor sum_j Q_j beta_j + intercept.
  Vec linear_predictor(const BlockCoefficients& coef) const {
    Vec u = Vec::Constant(n, coef.intercept);
    for (int j = 0; j < n_blocks(); ++j) {
      const auto& b = coef.blocks[static_cast<std::size_t>(j)];
      if (b.size() > 0 && !b.isZero(0.0)) u.noalias() += Q(j) * b;
    }
    return u;
  }

  double loss_from_predictor(const Vec& u) const {
    if (loss == LossKind::quadratic) {
      return (y - u).squaredNorm() / (2.0 * static_cast<double>(n));
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) total += detail::logistic_term(y[i] * u[i]);
    return total / static_cast<double>(n);
  }

  double loss_value(const BlockCoefficients& coef) const {
    return loss_from_predictor(linear_predictor(coef));
  }

  /// Pointwise -dL/du, so every block gradient is -(1/N) Q_j^T w.
  /// Quadratic: w = y - u. Logistic: w = y * sigma(-y * u).
  Vec negative_loss_derivative(const Vec& u) const {
    if (loss == LossKind::quadratic) return y - u;
    Vec w(n);
    for (Eigen::Index i = 0; i < n; ++i) w[i] = y[i] * detail::sigmoid(-y[i] * u[i]);
    return w;
  }

  Vec block_gradient_from_residual(const Vec& w, int j) const {
    return Q(j).transpose() * w / (-static_cast<double>(n));
  }

  Vec block_gradient(const BlockCoefficients& coef, int j) const {
    return block_gradient_from_residual(negative_loss_derivative(linear_predictor(coef)), j);
  }

  /// d/d intercept of the loss (also the residual mean, negated).
  double intercept_gradient(const Vec& u) const {
    return -negative_loss_derivative(u).mean();
  }
};

/// Largest eigenvalue of (1/N) B^T B, times 1/4 for logistic curvature.
/// Blocks built by orthonormalize_block give exactly 1 (or 1/4).
inline double block_lipschitz(LossKind loss, const Mat& block) {
  if (block.cols() == 0) return 0.0;
  const Mat gram = block.transpose() * block / static_cast<double>(block.rows());
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  const double top = es.eigenvalues().maxCoeff();
  return loss == LossKind::logistic ? 0.25 * top : top;
}

inline double block_lipschitz(const Problem& prob, int j) {
  return block_lipschitz(prob.loss, prob.Q(j));
}

inline double global_lipschitz(const Problem& prob) {
  const double base = prob.gram_top_eig >= 0.0 ? prob.gram_top_eig
                                               : top_gram_eigenvalue(*prob.blocks, prob.n);
  return prob.loss == LossKind::logistic ? 0.25 * base : base;
}

/// Omega^SPLAM scaled by lambda: lambda * sum_j [alpha ||beta_j|| +
/// (1-alpha) ||beta_{j,-1}||]. The intercept is not penalized.
inline double penalty_value(const BlockCoefficients& coef, const PenaltyParams& pen) {
  double total = 0.0;
  for (const auto& b : coef.blocks) {
    if (b.size() == 0) continue;
    total += pen.alpha * b.norm();
    if (b.size() > 1) total += (1.0 - pen.alpha) * b.tail(b.size() - 1).norm();
  }
  return pen.lambda * total;
}

inline double objective_value(const Problem& prob, const BlockCoefficients& coef,
                              const PenaltyParams& pen) {
  return prob.loss_value(coef) + penalty_value(coef, pen);
}

}  // namespace splam
