#pragma once

#include <Eigen/Core>

namespace hyperncs::hyperbolic {

/// Margin kept between any projected point and the ball boundary. artanh
/// diverges at the boundary, so points are never allowed closer than this.
inline constexpr double kBallEps = 1e-5;

/// A point strictly inside the Poincare ball of curvature c (radius 1/sqrt(c)
/// for c > 0). c == 0 selects the Euclidean degeneration, where the "ball" is
/// all of R^m and every map below is the identity or plain vector arithmetic.
struct BallPoint {
  Eigen::VectorXd coords;
  double curvature = 1.0;
};

/// Clamps p into the ball: points with c*|p|^2 >= (1 - kBallEps)^2 are rescaled
/// to norm (1 - kBallEps)/sqrt(c). No-op for c == 0 or points already inside.
BallPoint project_to_ball(Eigen::VectorXd p, double curvature);

/// Mobius addition x (+)_c y. Output is projected into the ball.
BallPoint mobius_add(const BallPoint& x, const BallPoint& y);

/// Exponential map at the origin: v -> tanh(sqrt(c)|v|) * v / (sqrt(c)|v|).
/// The image of a finite tangent vector is strictly inside the ball already;
/// only tanh saturating to 1.0 in double arithmetic is guarded against.
BallPoint exp_map_zero(const Eigen::VectorXd& v, double curvature);

/// Logarithmic map at the origin, the exact inverse of exp_map_zero.
Eigen::VectorXd log_map_zero(const BallPoint& y);

/// Exponential map at base point x, with conformal factor 2 / (1 - c|x|^2).
BallPoint exp_map(const BallPoint& x, const Eigen::VectorXd& v);

/// Logarithmic map at base point x; inverse of exp_map at the same base.
Eigen::VectorXd log_map(const BallPoint& x, const BallPoint& y);

}  // namespace hyperncs::hyperbolic
