#pragma once

#include <Eigen/Core>
#include <atomic>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

namespace hyperncs::problems {

/// Raised when a budget-guarded problem would exceed its evaluation budget.
class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(long budget)
      : std::runtime_error("evaluation budget exhausted (" +
                           std::to_string(budget) + ")"),
        budget_(budget) {}
  long budget() const { return budget_; }

 private:
  long budget_;
};

/// An expensive-to-evaluate fitness function over flat parameter vectors.
/// Fitness is always maximised. evaluate() is deterministic given the vector
/// and the instance's fixed seed; the call counter increments atomically.
class FitnessProblem {
 public:
  virtual ~FitnessProblem() = default;

  virtual const std::string& name() const = 0;
  virtual int dim() const = 0;
  virtual Eigen::VectorXd lower_bounds() const = 0;
  virtual Eigen::VectorXd upper_bounds() const = 0;

  double evaluate(const Eigen::VectorXd& x);
  virtual long eval_count() const { return counter_.load(); }

 protected:
  virtual double evaluate_impl(const Eigen::VectorXd& x) const = 0;

 private:
  std::atomic<long> counter_{0};
};

/// -sum((x - s)^2) with a seeded hidden shift s; maximum 0 at x == s.
class SphereProblem : public FitnessProblem {
 public:
  SphereProblem(int dim, std::uint64_t seed);
  const std::string& name() const override { return name_; }
  int dim() const override { return static_cast<int>(shift_.size()); }
  Eigen::VectorXd lower_bounds() const override;
  Eigen::VectorXd upper_bounds() const override;
  const Eigen::VectorXd& shift() const { return shift_; }

 protected:
  double evaluate_impl(const Eigen::VectorXd& x) const override;

 private:
  std::string name_ = "sphere";
  Eigen::VectorXd shift_;
};

/// Shifted Rastrigin, negated so the maximum is 0 at the shift point.
class RastriginProblem : public FitnessProblem {
 public:
  RastriginProblem(int dim, std::uint64_t seed);
  const std::string& name() const override { return name_; }
  int dim() const override { return static_cast<int>(shift_.size()); }
  Eigen::VectorXd lower_bounds() const override;
  Eigen::VectorXd upper_bounds() const override;
  const Eigen::VectorXd& shift() const { return shift_; }

 protected:
  double evaluate_impl(const Eigen::VectorXd& x) const override;

 private:
  std::string name_ = "rastrigin";
  Eigen::VectorXd shift_;
};

/// Deterministic 2-D point-mass control task. The parameter vector is the
/// flattened weight set of a state -> action MLP (tanh throughout, actions in
/// [-1, 1]^2); Euler integration with fixed dt; return is the negated sum of
/// squared distances to the goal, so higher is better and 0 is unreachable
/// perfection from a standing start away from the goal.
struct ControlTask {
  int state_dim = 4;   // position (2) + velocity (2)
  int action_dim = 2;
  int hidden = 16;
  int horizon = 200;
  double dt = 0.05;
  Eigen::Vector2d start{1.0, 0.0};
  Eigen::Vector2d goal{0.0, 0.0};

  int param_count() const;
};

class PointMassProblem : public FitnessProblem {
 public:
  explicit PointMassProblem(ControlTask task = {});
  const std::string& name() const override { return name_; }
  int dim() const override { return task_.param_count(); }
  Eigen::VectorXd lower_bounds() const override;
  Eigen::VectorXd upper_bounds() const override;
  const ControlTask& task() const { return task_; }

 protected:
  double evaluate_impl(const Eigen::VectorXd& x) const override;

 private:
  std::string name_ = "pointmass";
  ControlTask task_;
};

/// Throws BudgetExhausted once the underlying problem's counter reaches the
/// budget. The counter is the wrapped problem's own, so nested guards share
/// it and the tightest budget binds.
class BudgetGuard : public FitnessProblem {
 public:
  BudgetGuard(std::shared_ptr<FitnessProblem> inner, long budget);

  const std::string& name() const override { return inner_->name(); }
  int dim() const override { return inner_->dim(); }
  Eigen::VectorXd lower_bounds() const override { return inner_->lower_bounds(); }
  Eigen::VectorXd upper_bounds() const override { return inner_->upper_bounds(); }
  long eval_count() const override { return inner_->eval_count(); }

 protected:
  double evaluate_impl(const Eigen::VectorXd& x) const override;

 private:
  std::shared_ptr<FitnessProblem> inner_;
  long budget_;
};

struct ProblemSpec {
  std::string name = "sphere";
  int dim = 0;  // 0 = problem default (pointmass derives its own)
  std::uint64_t seed = 0;
  int eval_latency_ms = 0;  // artificial per-evaluation cost
};

/// Registry lookup by name: sphere | rastrigin | pointmass.
std::shared_ptr<FitnessProblem> make_problem(const ProblemSpec& spec);

}  // namespace hyperncs::problems
