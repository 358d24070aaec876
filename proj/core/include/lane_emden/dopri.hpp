#pragma once

// Dormand-Prince 5(4) integrator for two-component first-order systems, with
// the classical fourth-order continuous extension kept per accepted step.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace lane_emden {

using State = std::array<double, 2>;

/// One accepted step together with its dense-output polynomial.
///   y(r0 + theta h) = c0 + theta (c1 + (1-theta)(c2 + theta (c3 + (1-theta) c4)))
struct DenseStep {
  double r0 = 0.0;
  double h = 0.0;
  std::array<State, 5> coef{};

  double r1() const { return r0 + h; }
  State value(double r) const;
  /// d/dr of the interpolant.
  State derivative(double r) const;
};

/// Piecewise dense output over consecutive accepted steps.
class DenseOutput {
 public:
  void push(const DenseStep& step) { steps_.push_back(step); }
  bool empty() const { return steps_.empty(); }
  std::size_t size() const { return steps_.size(); }
  const DenseStep& step(std::size_t i) const { return steps_[i]; }
  const std::vector<DenseStep>& steps() const { return steps_; }

  double front() const { return steps_.front().r0; }
  double back() const { return steps_.back().r1(); }

  /// Index of the step containing r (clamped to the ends).
  std::size_t locate(double r) const;
  State value(double r) const { return steps_[locate(r)].value(r); }
  State derivative(double r) const { return steps_[locate(r)].derivative(r); }

 private:
  std::vector<DenseStep> steps_;
};

struct StepControl {
  double abs_tol = 1e-14;
  double rel_tol = 1e-12;
  /// Absolute tolerance of component 1 is abs_tol * derivative_scale(r).
  /// Used to control r*u' instead of u' when u' spans many decades.
  std::function<double(double)> derivative_scale;
  std::size_t max_steps = 2'000'000;
  double initial_step = 0.0;  ///< 0 selects an automatic guess
};

using Rhs = std::function<State(double, const State&)>;
/// Called after every accepted step; returning false stops the integration.
using StepObserver = std::function<bool(const DenseStep&, const State& y_end)>;

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  double r_end = 0.0;
  State y_end{};
  bool stopped_by_observer = false;
};

/// Integrates y' = rhs(r, y) from r0 to r_end. Throws Error(StepUnderflow) when
/// the step size collapses below machine resolution of r.
IntegrationStats integrate_dopri(const Rhs& rhs, double r0, const State& y0, double r_end,
                                 const StepControl& ctl, const StepObserver& observer);

}  // namespace lane_emden
