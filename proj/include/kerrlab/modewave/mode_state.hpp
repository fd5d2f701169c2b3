#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "kerrlab/modewave/potential.hpp"

namespace kerrlab::modewave {

using Complex = std::complex<double>;
using Field = std::vector<Complex>;

// Uniform grid on [lo, hi] in r*; nodes include both ends.
struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t n = 0;

  // Node count chosen so the spacing is delta up to rounding of (hi - lo) / delta.
  static Grid with_spacing(double lo, double hi, double delta);

  double spacing() const noexcept { return (hi - lo) / static_cast<double>(n - 1); }
  double x(std::size_t i) const noexcept { return lo + static_cast<double>(i) * spacing(); }
  bool operator==(const Grid&) const = default;
};

enum class BoundaryRule {
  Sommerfeld,  // outgoing: psi_t = -psi_x on the right, psi_t = psi_x on the left
  Reflecting,  // psi = 0
};

std::string_view to_string(BoundaryRule rule) noexcept;

// Fields psi and pi = psi_t on the grid at time t, with the potential and
// radius cached per node.
class ModeState {
 public:
  ModeState(Grid grid, PotentialSpec spec, double cfl = 0.9, BoundaryRule left = BoundaryRule::Sommerfeld,
            BoundaryRule right = BoundaryRule::Sommerfeld);

  const Grid& grid() const noexcept { return grid_; }
  const PotentialSpec& spec() const noexcept { return spec_; }
  double cfl() const noexcept { return cfl_; }
  double dt() const noexcept { return cfl_ * grid_.spacing(); }
  double time() const noexcept { return time_; }
  BoundaryRule left_boundary() const noexcept { return left_; }
  BoundaryRule right_boundary() const noexcept { return right_; }

  Field& psi() noexcept { return psi_; }
  Field& pi() noexcept { return pi_; }
  const Field& psi() const noexcept { return psi_; }
  const Field& pi() const noexcept { return pi_; }

  std::size_t size() const noexcept { return grid_.n; }
  double rstar(std::size_t i) const noexcept { return grid_.x(i); }
  double r(std::size_t i) const noexcept { return r_[i]; }
  double lapse(std::size_t i) const noexcept { return h_[i]; }  // H = 1 - 2M/r
  double v_real(std::size_t i) const noexcept { return vr_[i]; }
  double v_real_drstar(std::size_t i) const noexcept { return dvr_[i]; }
  double v_imag(std::size_t i) const noexcept { return vi_[i]; }
  bool has_imaginary_part() const noexcept { return spec_.epsilon != 0.0; }

  void set_data(const std::function<Complex(double)>& psi0, const std::function<Complex(double)>& pi0);
  void set_time(double t) noexcept { time_ = t; }

 private:
  Grid grid_;
  PotentialSpec spec_;
  double cfl_;
  BoundaryRule left_;
  BoundaryRule right_;
  double time_ = 0.0;
  Field psi_;
  Field pi_;
  std::vector<double> r_, h_, vr_, dvr_, vi_;
};

}  // namespace kerrlab::modewave
