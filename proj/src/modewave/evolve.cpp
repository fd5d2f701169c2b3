#include "kerrlab/modewave/evolve.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "kerrlab/error.hpp"

namespace kerrlab::modewave {

Evolution::Evolution(ModeState& state, EvolveOptions options) : state_(state), options_(std::move(options)) {
  if (options_.ledger_stride == 0) throw Error(ErrorKind::InvalidSpec, "ledger stride must be >= 1");
  if (!(state_.cfl() > 0.0 && state_.cfl() <= 1.0)) throw Error(ErrorKind::CflViolation, "CFL factor outside (0, 1]");
  if (options_.morawetz) profile_ = sample_profile(*options_.morawetz, state_);
  if (options_.window) local_energy(state_, (*options_.window)[0], (*options_.window)[1]);
  check_finite();

  ledger_ = Ledger("mode_s" + std::to_string(state_.spec().spin) + "_l" + std::to_string(state_.spec().l), "time", "M");
  ledger_.add_column("E", "1");
  ledger_.add_column("F", "1/M");
  ledger_.add_column("flux", "1/M");
  ledger_.add_column("int_F", "1");
  ledger_.add_column("int_flux", "1");
  ledger_.add_column("energy_residual", "1");
  if (profile_) {
    ledger_.add_column("I", "1");
    ledger_.add_column("B", "1/M");
    ledger_.add_column("B_gradient", "1/M");
    ledger_.add_column("B_field", "1/M");
    ledger_.add_column("I_im", "1/M");
    ledger_.add_column("int_B", "1");
    ledger_.add_column("int_B_gradient", "1");
    ledger_.add_column("int_im", "1");
    ledger_.add_column("morawetz_residual", "1");
  }
  if (options_.window) ledger_.add_column("local_E", "1");
  ledger_.metadata()["boundary_left"] = std::string(to_string(state_.left_boundary()));
  ledger_.metadata()["boundary_right"] = std::string(to_string(state_.right_boundary()));
  ledger_.metadata()["induced_weight"] = options_.induced_weight ? "H^-1/2" : "none";
  if (profile_) ledger_.metadata()["profile"] = options_.morawetz->name;

  t0_ = state_.time();
  e0_ = energy(state_) - boundary_node_energy(state_);
  acc_.assign(state_.size(), Complex{});
  compute_acceleration();
  last_ = rates();
  i0_ = last_.terms.current;
  record(last_);
}

void Evolution::compute_acceleration() {
  const auto& psi = state_.psi();
  const std::size_t n = state_.size();
  const double d = state_.grid().spacing();
  const double inv_d2 = 1.0 / (d * d);
  const bool complex_v = state_.has_imaginary_part();
  // real arithmetic spelled out: a generic complex product goes through the
  // NaN-recovering library routine and dominates the step otherwise
  if (complex_v) {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const Complex lap = (psi[i - 1] - 2.0 * psi[i] + psi[i + 1]) * inv_d2;
      const double vr = state_.v_real(i), vi = state_.v_imag(i);
      const double a = psi[i].real(), b = psi[i].imag();
      acc_[i] = lap - Complex(vr * a - vi * b, vr * b + vi * a);
    }
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i)
      acc_[i] = (psi[i - 1] - 2.0 * psi[i] + psi[i + 1]) * inv_d2 - state_.v_real(i) * psi[i];
  }
}

Evolution::Rates Evolution::rates() const {
  Rates r;
  r.flux = boundary_flux(state_);
  r.im = im_flux(state_);
  if (profile_) {
    r.terms = morawetz(state_, *profile_);
    r.bulk = r.terms.bulk();
    r.morawetz_im = r.terms.imaginary;
  }
  return r;
}

void Evolution::step() {
  auto& psi = state_.psi();
  auto& pi = state_.pi();
  const std::size_t n = state_.size();
  const double d = state_.grid().spacing();
  const double dt = state_.dt();
  const double half = 0.5 * dt;

  for (std::size_t i = 1; i + 1 < n; ++i) pi[i] += half * acc_[i];

  const Complex left_old = psi[0];
  const Complex right_old = psi[n - 1];
  const Complex dleft_old = (-3.0 * psi[0] + 4.0 * psi[1] - psi[2]) / (2.0 * d);
  const Complex dright_old = (3.0 * psi[n - 1] - 4.0 * psi[n - 2] + psi[n - 3]) / (2.0 * d);
  for (std::size_t i = 1; i + 1 < n; ++i) psi[i] += dt * pi[i];

  const double implicit = 1.0 + 3.0 * dt / (4.0 * d);
  if (state_.left_boundary() == BoundaryRule::Sommerfeld) {
    psi[0] = (left_old + half * (dleft_old + (4.0 * psi[1] - psi[2]) / (2.0 * d))) / implicit;
    pi[0] = (-3.0 * psi[0] + 4.0 * psi[1] - psi[2]) / (2.0 * d);
  } else {
    psi[0] = pi[0] = 0.0;
  }
  if (state_.right_boundary() == BoundaryRule::Sommerfeld) {
    psi[n - 1] = (right_old - half * (dright_old + (-4.0 * psi[n - 2] + psi[n - 3]) / (2.0 * d))) / implicit;
    pi[n - 1] = -(3.0 * psi[n - 1] - 4.0 * psi[n - 2] + psi[n - 3]) / (2.0 * d);
  } else {
    psi[n - 1] = pi[n - 1] = 0.0;
  }

  compute_acceleration();
  for (std::size_t i = 1; i + 1 < n; ++i) pi[i] += half * acc_[i];

  ++steps_;
  // t = steps * dt rather than repeated addition, so equal times compare equal
  state_.set_time(t0_ + static_cast<double>(steps_) * dt);

  const Rates now = rates();
  int_f_ += half * (last_.im + now.im);
  int_flux_ += half * (last_.flux + now.flux);
  int_b_ += half * (last_.bulk + now.bulk);
  int_bg_ += half * (last_.terms.bulk_gradient + now.terms.bulk_gradient);
  int_im_ += half * (last_.morawetz_im + now.morawetz_im);
  last_ = now;
}

void Evolution::record(const Rates& r) {
  std::vector<double> row;
  const double e = energy(state_);
  const double balance = e - boundary_node_energy(state_) - e0_ + int_f_ - int_flux_;
  const double reported = options_.induced_weight ? energy(state_, true) : e;
  row.insert(row.end(), {reported, r.im, r.flux, int_f_, int_flux_, balance});
  if (profile_) {
    const auto& t = r.terms;
    row.insert(row.end(), {t.current, t.bulk(), t.bulk_gradient, t.bulk_field, t.imaginary, int_b_, int_bg_, int_im_,
                           t.current - i0_ + int_b_ - int_im_});
  }
  if (options_.window)
    row.push_back(local_energy(state_, (*options_.window)[0], (*options_.window)[1], options_.induced_weight));
  ledger_.append(state_.time(), row);
}

void Evolution::check_finite() const {
  const auto& psi = state_.psi();
  const auto& pi = state_.pi();
  for (std::size_t i = 0; i < state_.size(); ++i) {
    if (std::isfinite(psi[i].real()) && std::isfinite(psi[i].imag()) && std::isfinite(pi[i].real()) &&
        std::isfinite(pi[i].imag()))
      continue;
    std::ostringstream msg;
    msg.precision(17);
    msg << "non-finite field at t=" << state_.time() << ", node " << i << " (r*=" << state_.rstar(i)
        << "), psi=" << psi[i] << ", pi=" << pi[i];
    throw Error(ErrorKind::NonFiniteField, msg.str());
  }
}

void Evolution::advance(std::size_t n_steps) {
  for (std::size_t k = 0; k < n_steps; ++k) {
    step();
    const bool last = k + 1 == n_steps;
    if (steps_ % options_.ledger_stride == 0 || last) {
      check_finite();
      if (ledger_.index().back() != state_.time()) record(last_);
    }
  }
}

void Evolution::advance_to(double t_end) {
  const double dt = state_.dt();
  const double remaining = (t_end - state_.time()) / dt;
  if (remaining > 0.5) advance(static_cast<std::size_t>(std::llround(remaining)));
}

Ledger evolve(ModeState& state, std::size_t n_steps, const EvolveOptions& options) {
  if (n_steps == 0) throw Error(ErrorKind::InvalidSpec, "n_steps must be >= 1");
  Evolution run(state, options);
  run.advance(n_steps);
  return run.ledger();
}

}  // namespace kerrlab::modewave
