#pragma once

#include <array>
#include <cstddef>
#include <functional>

namespace kerrlab::geodesic {

// Position and velocity of a geodesic stacked into one first-order state.
using OdeState = std::array<double, 8>;

// Right-hand side; returns false when the state has left the domain where the
// system is defined (the step is then retried with a smaller size).
using OdeRhs = std::function<bool(double, const OdeState&, OdeState&)>;

struct StepperOptions {
  double rtol = 1e-10;
  double atol = 1e-10;
  double initial_step = 1e-2;
  double min_step = 1e-13;
};

// Continuous extension of one accepted step (fourth order).
struct DenseSegment {
  double x0 = 0.0;
  double h = 0.0;
  std::array<OdeState, 5> coeff{};

  OdeState operator()(double x) const;
};

enum class StepStatus { Accepted, DomainExit, Underflow };

// Dormand-Prince 5(4) pair with PI-free standard step-size control and FSAL.
class DormandPrince45 {
 public:
  DormandPrince45(OdeRhs rhs, StepperOptions options);

  // Advances (x, y) by one accepted step not passing x_end. On DomainExit or
  // Underflow the state is left untouched.
  StepStatus step(double& x, OdeState& y, double x_end);

  const DenseSegment& last_segment() const noexcept { return segment_; }
  double step_size() const noexcept { return h_; }
  std::size_t accepted() const noexcept { return accepted_; }
  std::size_t rejected() const noexcept { return rejected_; }

 private:
  OdeRhs rhs_;
  StepperOptions options_;
  double h_;
  bool have_k1_ = false;
  OdeState k1_{};
  DenseSegment segment_{};
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
};

}  // namespace kerrlab::geodesic
