#include "hyperncs/hyperbolic.hpp"

#include <cmath>
#include <stdexcept>

namespace hyperncs::hyperbolic {

namespace {

void check_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) {
    throw std::invalid_argument(std::string(what) + ": non-finite input");
  }
}

void check_pair(const BallPoint& x, const BallPoint& y, const char* what) {
  if (x.coords.size() != y.coords.size()) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch");
  }
  if (x.curvature != y.curvature) {
    throw std::invalid_argument(std::string(what) + ": curvature mismatch");
  }
}

void check_curvature(double c, const char* what) {
  if (!(c >= 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument(std::string(what) + ": curvature must be >= 0");
  }
}

void check_inside(const BallPoint& p, const char* what) {
  check_finite(p.coords, what);
  check_curvature(p.curvature, what);
  if (p.curvature > 0.0 &&
      p.curvature * p.coords.squaredNorm() >= 1.0) {
    throw std::invalid_argument(std::string(what) + ": point outside the ball");
  }
}

}  // namespace

BallPoint project_to_ball(Eigen::VectorXd p, double curvature) {
  check_finite(p, "project_to_ball");
  check_curvature(curvature, "project_to_ball");
  if (curvature > 0.0) {
    const double max_norm = (1.0 - kBallEps) / std::sqrt(curvature);
    const double norm = p.norm();
    if (norm > max_norm) {
      p *= max_norm / norm;
    }
  }
  return BallPoint{std::move(p), curvature};
}

BallPoint mobius_add(const BallPoint& x, const BallPoint& y) {
  check_pair(x, y, "mobius_add");
  check_inside(x, "mobius_add");
  check_inside(y, "mobius_add");
  const double c = x.curvature;
  if (c == 0.0) {
    return BallPoint{x.coords + y.coords, 0.0};
  }
  const double dot = x.coords.dot(y.coords);
  const double x2 = x.coords.squaredNorm();
  const double y2 = y.coords.squaredNorm();
  const double den = 1.0 + 2.0 * c * dot + c * c * x2 * y2;
  Eigen::VectorXd num =
      (1.0 + 2.0 * c * dot + c * y2) * x.coords + (1.0 - c * x2) * y.coords;
  return project_to_ball(num / den, c);
}

BallPoint exp_map_zero(const Eigen::VectorXd& v, double curvature) {
  check_finite(v, "exp_map_zero");
  check_curvature(curvature, "exp_map_zero");
  const double norm = v.norm();
  if (curvature == 0.0 || norm == 0.0) {
    return BallPoint{v, curvature};
  }
  const double sc = std::sqrt(curvature);
  // tanh rounds to 1.0 for arguments beyond ~19; keep c*|p|^2 strictly below
  // 1 even after the squaring rounds
  const double t = std::min(std::tanh(sc * norm), 1.0 - 1e-12);
  return BallPoint{(t / (sc * norm)) * v, curvature};
}

Eigen::VectorXd log_map_zero(const BallPoint& y) {
  check_inside(y, "log_map_zero");
  const double c = y.curvature;
  const double norm = y.coords.norm();
  if (c == 0.0 || norm == 0.0) {
    return y.coords;
  }
  const double sc = std::sqrt(c);
  return (std::atanh(sc * norm) / (sc * norm)) * y.coords;
}

BallPoint exp_map(const BallPoint& x, const Eigen::VectorXd& v) {
  check_inside(x, "exp_map");
  check_finite(v, "exp_map");
  if (x.coords.size() != v.size()) {
    throw std::invalid_argument("exp_map: dimension mismatch");
  }
  const double c = x.curvature;
  const double norm = v.norm();
  if (c == 0.0) {
    return BallPoint{x.coords + v, 0.0};
  }
  if (norm == 0.0) {
    return x;
  }
  const double sc = std::sqrt(c);
  const double lambda = 2.0 / (1.0 - c * x.coords.squaredNorm());
  const double t = std::min(std::tanh(sc * lambda * norm / 2.0), 1.0 - 1e-12);
  const BallPoint w{(t / (sc * norm)) * v, c};
  return mobius_add(x, w);
}

Eigen::VectorXd log_map(const BallPoint& x, const BallPoint& y) {
  check_pair(x, y, "log_map");
  check_inside(x, "log_map");
  check_inside(y, "log_map");
  const double c = x.curvature;
  if (c == 0.0) {
    return y.coords - x.coords;
  }
  const BallPoint minus_x{-x.coords, c};
  const BallPoint d = mobius_add(minus_x, y);
  const double norm = d.coords.norm();
  if (norm == 0.0) {
    return Eigen::VectorXd::Zero(x.coords.size());
  }
  const double sc = std::sqrt(c);
  const double lambda = 2.0 / (1.0 - c * x.coords.squaredNorm());
  const double coef = (2.0 / (sc * lambda)) * std::atanh(sc * norm) / norm;
  return coef * d.coords;
}

}  // namespace hyperncs::hyperbolic
