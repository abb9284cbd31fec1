#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "splam/objective.hpp"

namespace splam {

/// Euclidean projection of u onto the ball of radius r.
inline Vec project_ball(const Vec& u, double r) {
  if (r < 0.0) throw std::invalid_argument("ball radius must be >= 0");
  const double norm = u.norm();
  if (norm <= r) return u;
  if (r == 0.0) return Vec::Zero(u.size());
  return u * (r / norm);
}

/// Dual variables of the blockwise prox problem: ||gamma1|| <= r1,
/// ||gamma2|| <= r2, and the primal solution is g - gamma1 - [0, gamma2].
struct DualPair {
  Vec gamma1;
  Vec gamma2;
};

/// One-pass dual solve: gamma2 projects the nonlinear tail, gamma1 projects
/// what remains of the whole block.
inline DualPair prox_block_dual(const Vec& g, double r1, double r2) {
  if (r1 < 0.0 || r2 < 0.0) throw std::invalid_argument("prox radii must be >= 0");
  const auto m = g.size();
  DualPair d;
  d.gamma2 = m > 1 ? project_ball(g.tail(m - 1), r2) : Vec(0);
  Vec shifted = g;
  if (m > 1) shifted.tail(m - 1) -= d.gamma2;
  d.gamma1 = project_ball(shifted, r1);
  return d;
}

/// Exact minimizer of (1/2)||z - g||^2 + r1 ||z||_2 + r2 ||z_{-1}||_2,
/// obtained from the dual in one pass: project the nonlinear tail, then the
/// whole block.
inline Vec prox_block(const Vec& g, double r1, double r2) {
  if (r1 < 0.0 || r2 < 0.0) throw std::invalid_argument("prox radii must be >= 0");
  const auto m = g.size();
  if (m == 0) return g;
  Vec z = g;
  if (m > 1 && r2 > 0.0) {
    const double tail_norm = z.tail(m - 1).norm();
    if (tail_norm <= r2) {
      z.tail(m - 1).setZero();
    } else {
      z.tail(m - 1) *= 1.0 - r2 / tail_norm;
    }
  }
  if (r1 > 0.0) {
    const double norm = z.norm();
    if (norm <= r1) {
      z.setZero();
    } else {
      z *= 1.0 - r1 / norm;
    }
  }
  return z;
}

/// Blockwise prox of t * lambda * Omega^SPLAM; the intercept passes through.
inline BlockCoefficients prox_full(const BlockCoefficients& coef, double lambda, double alpha,
                                   double t) {
  BlockCoefficients out = coef;
  const double r1 = t * lambda * alpha;
  const double r2 = t * lambda * (1.0 - alpha);
  for (auto& b : out.blocks) {
    if (b.size() > 0) b = prox_block(b, r1, r2);
  }
  return out;
}

}  // namespace splam
