#pragma once

#include <complex>

namespace kerrlab::modewave {

// Mode potential for spin s, multipole l on Schwarzschild of mass M:
//   V_R = H (l(l+1)/r^2 + (1 - s^2) 2M/r^3),  H = 1 - 2M/r
// plus an optional imaginary bump eps * exp(-(r* - r*_3M)^2 / (2 w^2)).
struct PotentialSpec {
  int spin = 0;
  int l = 0;
  double mass = 1.0;
  double epsilon = 0.0;
  double width = 1.0;
};

// Throws InvalidSpec on s outside {0,1,2}, l < s, M < 0, or a bad bump.
void validate(const PotentialSpec& spec);

double potential_real(const PotentialSpec& spec, double r);
// d V_R / d r*
double potential_real_drstar(const PotentialSpec& spec, double r);
double potential_imag(const PotentialSpec& spec, double rstar);
// Tortoise position of the photon sphere r = 3M.
double trapping_rstar(double mass);

std::complex<double> effective_potential(const PotentialSpec& spec, double r);

}  // namespace kerrlab::modewave
