#include "kerrlab/modewave/mode_state.hpp"

#include <cmath>
#include <sstream>

#include "kerrlab/error.hpp"
#include "kerrlab/modewave/tortoise.hpp"

namespace kerrlab::modewave {

Grid Grid::with_spacing(double lo, double hi, double delta) {
  if (!(hi > lo) || !(delta > 0.0) || !std::isfinite(lo) || !std::isfinite(hi))
    throw Error(ErrorKind::InvalidSpec, "grid needs finite lo < hi and positive spacing");
  const double cells = std::round((hi - lo) / delta);
  if (cells < 4.0) throw Error(ErrorKind::InvalidSpec, "grid needs at least 4 cells");
  return {lo, hi, static_cast<std::size_t>(cells) + 1};
}

std::string_view to_string(BoundaryRule rule) noexcept {
  return rule == BoundaryRule::Sommerfeld ? "sommerfeld" : "reflecting";
}

ModeState::ModeState(Grid grid, PotentialSpec spec, double cfl, BoundaryRule left, BoundaryRule right)
    : grid_(grid), spec_(spec), cfl_(cfl), left_(left), right_(right) {
  validate(spec_);
  if (grid_.n < 5 || !(grid_.hi > grid_.lo)) throw Error(ErrorKind::InvalidSpec, "grid needs at least 5 nodes");
  if (!(cfl_ > 0.0 && cfl_ <= 1.0)) {
    std::ostringstream msg;
    msg << "CFL factor " << cfl_ << " outside (0, 1]";
    throw Error(ErrorKind::CflViolation, msg.str());
  }
  // with l = 0 the flat potential vanishes and r plays no role
  if (spec_.mass == 0.0 && spec_.l > 0 && !(grid_.lo > 0.0))
    throw Error(ErrorKind::InvalidSpec, "flat reduction uses r* = r and needs a grid inside r > 0");
  const std::size_t n = grid_.n;
  psi_.assign(n, Complex{});
  pi_.assign(n, Complex{});
  r_.resize(n);
  h_.resize(n);
  vr_.resize(n);
  dvr_.resize(n);
  vi_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = grid_.x(i);
    r_[i] = r_of_rstar(x, spec_.mass);
    h_[i] = tortoise_jacobian(r_[i], spec_.mass);
    vr_[i] = potential_real(spec_, r_[i]);
    dvr_[i] = potential_real_drstar(spec_, r_[i]);
    vi_[i] = potential_imag(spec_, x);
  }
}

void ModeState::set_data(const std::function<Complex(double)>& psi0, const std::function<Complex(double)>& pi0) {
  for (std::size_t i = 0; i < grid_.n; ++i) {
    psi_[i] = psi0(grid_.x(i));
    pi_[i] = pi0(grid_.x(i));
  }
  if (left_ == BoundaryRule::Reflecting) psi_.front() = pi_.front() = 0.0;
  if (right_ == BoundaryRule::Reflecting) psi_.back() = pi_.back() = 0.0;
}

}  // namespace kerrlab::modewave
