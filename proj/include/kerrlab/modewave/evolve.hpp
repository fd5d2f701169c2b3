#pragma once

#include <array>
#include <cstddef>
#include <optional>

#include "kerrlab/ledger.hpp"
#include "kerrlab/modewave/functionals.hpp"
#include "kerrlab/modewave/mode_state.hpp"

namespace kerrlab::modewave {

struct EvolveOptions {
  // Ledger rows every `ledger_stride` steps, plus the initial and final states.
  std::size_t ledger_stride = 1;
  std::optional<MultiplierProfile> morawetz;
  std::optional<std::array<double, 2>> window;
  bool induced_weight = false;
};

// Leapfrog in kick-drift-kick form: pi and psi live at whole steps, the
// half-step pi is internal. Interior nodes use the three-point Laplacian;
// Sommerfeld ends advance psi_t = -+psi_x by Crank-Nicolson with a one-sided
// second-order difference. Running time integrals of the flux terms are
// accumulated with the trapezoid rule on every step so the balance residual
// columns converge at second order.
//
// Ledger columns: E, F, flux, int_F, int_flux, energy_residual
// (= E_in - E_in(0) + int_F - int_flux, where E_in leaves out the two end
// nodes; see boundary_flux), then with a profile I, B, B_gradient,
// B_field, I_im, int_B, int_B_gradient, int_im, morawetz_residual
// (= I - I(0) + int_B - int_im), then local_E with a window.
class Evolution {
 public:
  Evolution(ModeState& state, EvolveOptions options = {});

  void advance(std::size_t n_steps);
  // Steps until time() >= t_end - dt/2.
  void advance_to(double t_end);

  const Ledger& ledger() const noexcept { return ledger_; }
  const ModeState& state() const noexcept { return state_; }
  std::size_t steps() const noexcept { return steps_; }

 private:
  struct Rates {
    double flux = 0.0;
    double im = 0.0;
    double bulk = 0.0;
    double morawetz_im = 0.0;
    MorawetzTerms terms{};
  };

  void step();
  void compute_acceleration();
  Rates rates() const;
  void record(const Rates& r);
  void check_finite() const;

  ModeState& state_;
  EvolveOptions options_;
  std::optional<ProfileSamples> profile_;
  Ledger ledger_;
  Field acc_;
  std::size_t steps_ = 0;
  double t0_ = 0.0;
  double e0_ = 0.0;
  double i0_ = 0.0;
  double int_f_ = 0.0, int_flux_ = 0.0, int_b_ = 0.0, int_bg_ = 0.0, int_im_ = 0.0;
  Rates last_{};
};

// One-shot form: evolves n_steps and returns the ledger.
Ledger evolve(ModeState& state, std::size_t n_steps, const EvolveOptions& options = {});

}  // namespace kerrlab::modewave
