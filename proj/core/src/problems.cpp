#include "hyperncs/problems.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <thread>

#include "hyperncs/dense_net.hpp"

namespace hyperncs::problems {

namespace {
constexpr double kPi = 3.14159265358979323846;

Eigen::VectorXd uniform_vector(int dim, double low, double high,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(low, high);
  return Eigen::VectorXd::NullaryExpr(dim, [&](auto) { return dist(rng); });
}
}  // namespace

double FitnessProblem::evaluate(const Eigen::VectorXd& x) {
  if (x.size() != dim()) {
    throw std::invalid_argument(name() + ": parameter dimension mismatch");
  }
  counter_.fetch_add(1, std::memory_order_relaxed);
  return evaluate_impl(x);
}

SphereProblem::SphereProblem(int dim, std::uint64_t seed)
    : shift_(uniform_vector(dim, -2.5, 2.5, seed)) {
  if (dim < 1) throw std::invalid_argument("sphere: dim must be >= 1");
}

Eigen::VectorXd SphereProblem::lower_bounds() const {
  return Eigen::VectorXd::Constant(dim(), -5.0);
}

Eigen::VectorXd SphereProblem::upper_bounds() const {
  return Eigen::VectorXd::Constant(dim(), 5.0);
}

double SphereProblem::evaluate_impl(const Eigen::VectorXd& x) const {
  return -(x - shift_).squaredNorm();
}

RastriginProblem::RastriginProblem(int dim, std::uint64_t seed)
    : shift_(uniform_vector(dim, -2.56, 2.56, seed)) {
  if (dim < 1) throw std::invalid_argument("rastrigin: dim must be >= 1");
}

Eigen::VectorXd RastriginProblem::lower_bounds() const {
  return Eigen::VectorXd::Constant(dim(), -5.12);
}

Eigen::VectorXd RastriginProblem::upper_bounds() const {
  return Eigen::VectorXd::Constant(dim(), 5.12);
}

double RastriginProblem::evaluate_impl(const Eigen::VectorXd& x) const {
  const Eigen::ArrayXd d = (x - shift_).array();
  const double sum =
      (d.square() - 10.0 * (2.0 * kPi * d).cos()).sum() + 10.0 * x.size();
  return -sum;
}

int ControlTask::param_count() const {
  return hidden * state_dim + hidden + action_dim * hidden + action_dim;
}

PointMassProblem::PointMassProblem(ControlTask task) : task_(task) {
  if (task_.horizon < 1 || task_.dt <= 0.0 || task_.hidden < 1) {
    throw std::invalid_argument("pointmass: invalid task");
  }
}

Eigen::VectorXd PointMassProblem::lower_bounds() const {
  return Eigen::VectorXd::Constant(dim(), -1.0);
}

Eigen::VectorXd PointMassProblem::upper_bounds() const {
  return Eigen::VectorXd::Constant(dim(), 1.0);
}

double PointMassProblem::evaluate_impl(const Eigen::VectorXd& x) const {
  const int s = task_.state_dim;
  const int h = task_.hidden;
  const int a = task_.action_dim;
  // unflatten: W1 (h x s), b1 (h), W2 (a x h), b2 (a), row-major per layer
  int off = 0;
  Eigen::MatrixXd w1(h, s);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < s; ++c) w1(r, c) = x[off++];
  Eigen::VectorXd b1 = x.segment(off, h);
  off += h;
  Eigen::MatrixXd w2(a, h);
  for (int r = 0; r < a; ++r)
    for (int c = 0; c < h; ++c) w2(r, c) = x[off++];
  Eigen::VectorXd b2 = x.segment(off, a);

  Eigen::Vector2d pos = task_.start;
  Eigen::Vector2d vel =Eigen::Vector2d::Zero();
  double cost = 0.0;
  for (int t = 0; t < task_.horizon; ++t) {
    Eigen::VectorXd state(s);
    state << pos, vel;
    const Eigen::VectorXd hidden = (w1 * state + b1).array().tanh();
    const Eigen::Vector2d action = (w2 * hidden + b2).array().tanh();
    vel += task_.dt * action;
    pos += task_.dt * vel;
    cost += (pos - task_.goal).squaredNorm();
  }
  return -cost;
}

BudgetGuard::BudgetGuard(std::shared_ptr<FitnessProblem> inner, long budget)
    : inner_(std::move(inner)), budget_(budget) {
  if (budget_ < 1) throw std::invalid_argument("BudgetGuard: budget must be >= 1");
}

double BudgetGuard::evaluate_impl(const Eigen::VectorXd& x) const {
  if (inner_->eval_count() >= budget_) {
    throw BudgetExhausted(budget_);
  }
  return inner_->evaluate(x);
}

namespace {

class LatencyWrapper : public FitnessProblem {
 public:
  LatencyWrapper(std::shared_ptr<FitnessProblem> inner, int latency_ms)
      : inner_(std::move(inner)), latency_ms_(latency_ms) {}
  const std::string& name() const override { return inner_->name(); }
  int dim() const override { return inner_->dim(); }
  Eigen::VectorXd lower_bounds() const override { return inner_->lower_bounds(); }
  Eigen::VectorXd upper_bounds() const override { return inner_->upper_bounds(); }
  long eval_count() const override { return inner_->eval_count(); }

 protected:
  double evaluate_impl(const Eigen::VectorXd& x) const override {
    std::this_thread::sleep_for(std::chrono::milliseconds(latency_ms_));
    return inner_->evaluate(x);
  }

 private:
  std::shared_ptr<FitnessProblem> inner_;
  int latency_ms_;
};

}  // namespace

std::shared_ptr<FitnessProblem> make_problem(const ProblemSpec& spec) {
  std::shared_ptr<FitnessProblem> p;
  if (spec.name == "sphere") {
    p = std::make_shared<SphereProblem>(spec.dim > 0 ? spec.dim : 50, spec.seed);
  } else if (spec.name == "rastrigin") {
    p = std::make_shared<RastriginProblem>(spec.dim > 0 ? spec.dim : 50,
                                           spec.seed);
  } else if (spec.name == "pointmass") {
    ControlTask task;
    if (spec.dim > 0 && spec.dim != task.param_count()) {
      throw std::invalid_argument(
          "pointmass: dim must be " + std::to_string(task.param_count()) +
          " (or 0 for the default)");
    }
    p = std::make_shared<PointMassProblem>(task);
  } else {
    throw std::invalid_argument("unknown problem: " + spec.name);
  }
  if (spec.eval_latency_ms > 0) {
    p = std::make_shared<LatencyWrapper>(std::move(p), spec.eval_latency_ms);
  }
  return p;
}

}  // namespace hyperncs::problems
