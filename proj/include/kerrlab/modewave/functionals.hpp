#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kerrlab/modewave/mode_state.hpp"

namespace kerrlab::modewave {

// Multiplier f(r*) with f' and f''' in r*.
struct MultiplierProfile {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> d1;
  std::function<double(double)> d3;
};

// f = 1 - 3M/r through r(r*); vanishes on the photon sphere.
MultiplierProfile photon_sphere_multiplier(double mass);
MultiplierProfile constant_multiplier(double c);
// f = tanh((r* - center) / width)
MultiplierProfile tanh_multiplier(double center, double width);

// Profile values on a state's grid; throws ProfileUndefined where any is not finite.
struct ProfileSamples {
  std::vector<double> f, d1, d3;
};
ProfileSamples sample_profile(const MultiplierProfile& profile, const ModeState& state);

// E = 1/2 int (|pi|^2 + |psi_x|^2 + V_R |psi|^2) dr*. The gradient term is a
// sum over cells of the forward difference, the others use trapezoid weights;
// with that pairing the semi-discrete evolution conserves E exactly. With
// induced_weight every density carries the factor H^{-1/2}.
double energy(const ModeState& state, bool induced_weight = false);

// Same integrand restricted to nodes with r* in [w1, w2].
double local_energy(const ModeState& state, double w1, double w2, bool induced_weight = false);

struct MorawetzTerms {
  double current = 0.0;        // I = int Re(conj(pi) (f psi_x + f'/2 psi))
  double bulk_gradient = 0.0;  // int f' |psi_x|^2
  double bulk_field = 0.0;     // -int (f'''/4 + f V_R'/2) |psi|^2
  double imaginary = 0.0;      // -int f V_I Im(conj(psi) psi_x)
  double bulk() const noexcept { return bulk_gradient + bulk_field; }
};

// dI/dt + B = imaginary + boundary terms.
MorawetzTerms morawetz(const ModeState& state, const ProfileSamples& profile);

// F = int V_I Im(conj(psi) pi); dE/dt = -F + boundary flux.
double im_flux(const ModeState& state);

// Re(conj(pi) psi_x) at the right end minus the same at the left end, with
// psi_x the difference across the end cell. This is exactly the rate at which
// the semi-discrete evolution moves energy through the ends, once the two
// half-weighted end nodes (boundary_node_energy) are taken out of E.
double boundary_flux(const ModeState& state);
double boundary_node_energy(const ModeState& state);

// sum_l (l(l+1))^n E_l over modes sharing grid, time and mass.
double order_n_energy(std::span<const ModeState> modes, int n);
double order_n_energy(std::span<const double> energies, std::span<const int> multipoles, int n);

}  // namespace kerrlab::modewave
