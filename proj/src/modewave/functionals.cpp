#include "kerrlab/modewave/functionals.hpp"

#include <cmath>
#include <sstream>

#include "kerrlab/error.hpp"
#include "kerrlab/modewave/tortoise.hpp"

namespace kerrlab::modewave {

MultiplierProfile photon_sphere_multiplier(double mass) {
  if (!(mass > 0.0))
    throw Error(ErrorKind::ProfileUndefined, "f = 1 - 3M/r needs M > 0 (no photon sphere on a flat grid)");
  const double m = mass;
  // q = f' = H dg/dr with g = 1 - 3M/r; each further r*-derivative is H d/dr
  auto f = [m](double x) { return 1.0 - 3.0 * m / r_of_rstar(x, m); };
  auto d1 = [m](double x) {
    const double r = r_of_rstar(x, m);
    return 3.0 * m * (1.0 - 2.0 * m / r) / (r * r);
  };
  auto d3 = [m](double x) {
    const double r = r_of_rstar(x, m);
    const double h = 1.0 - 2.0 * m / r;
    const double dh = 2.0 * m / (r * r);
    const double dq = 3.0 * m * (-2.0 / (r * r * r) + 6.0 * m / (r * r * r * r));
    const double ddq = 3.0 * m * (6.0 / (r * r * r * r) - 24.0 * m / (r * r * r * r * r));
    return h * (dh * dq + h * ddq);
  };
  return {"1-3M/r", f, d1, d3};
}

MultiplierProfile constant_multiplier(double c) {
  std::ostringstream name;
  name << "const(" << c << ")";
  return {name.str(), [c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
}

MultiplierProfile tanh_multiplier(double center, double width) {
  if (!(width > 0.0)) throw Error(ErrorKind::ProfileUndefined, "tanh profile width must be positive");
  std::ostringstream name;
  name << "tanh((r*-" << center << ")/" << width << ")";
  auto f = [=](double x) { return std::tanh((x - center) / width); };
  auto d1 = [=](double x) {
    const double t = std::tanh((x - center) / width);
    return (1.0 - t * t) / width;
  };
  auto d3 = [=](double x) {
    const double t = std::tanh((x - center) / width);
    return (1.0 - t * t) * (6.0 * t * t - 2.0) / (width * width * width);
  };
  return {name.str(), f, d1, d3};
}

ProfileSamples sample_profile(const MultiplierProfile& profile, const ModeState& state) {
  ProfileSamples s;
  const std::size_t n = state.size();
  s.f.resize(n);
  s.d1.resize(n);
  s.d3.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = state.rstar(i);
    s.f[i] = profile.f(x);
    s.d1[i] = profile.d1(x);
    s.d3[i] = profile.d3(x);
    if (!std::isfinite(s.f[i]) || !std::isfinite(s.d1[i]) || !std::isfinite(s.d3[i])) {
      std::ostringstream msg;
      msg << "profile " << profile.name << " is not finite at r*=" << x;
      throw Error(ErrorKind::ProfileUndefined, msg.str());
    }
  }
  return s;
}

namespace {

double weight_at(const ModeState& s, std::size_t i, bool induced) {
  return induced ? 1.0 / std::sqrt(s.lapse(i)) : 1.0;
}

double energy_between(const ModeState& s, std::size_t i0, std::size_t i1, bool induced) {
  const double d = s.grid().spacing();
  const auto& psi = s.psi();
  const auto& pi = s.pi();
  double nodes = 0.0;
  for (std::size_t i = i0; i <= i1; ++i) {
    const double w = (i == i0 || i == i1) ? 0.5 : 1.0;
    nodes += w * weight_at(s, i, induced) * (std::norm(pi[i]) + s.v_real(i) * std::norm(psi[i]));
  }
  double edges = 0.0;
  for (std::size_t i = i0; i < i1; ++i) {
    const double w = induced ? 0.5 * (weight_at(s, i, true) + weight_at(s, i + 1, true)) : 1.0;
    edges += w * std::norm(psi[i + 1] - psi[i]);
  }
  return 0.5 * (nodes * d + edges / d);
}

// Re and Im of conj(a) * b without the library complex product.
double re_conj_mul(const Complex& a, const Complex& b) { return a.real() * b.real() + a.imag() * b.imag(); }
double im_conj_mul(const Complex& a, const Complex& b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Second-order derivative at node i: central inside, one-sided at the ends.
Complex derivative(const Field& u, std::size_t i, double d) {
  const std::size_t n = u.size();
  if (i == 0) return (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * d);
  if (i == n - 1) return (3.0 * u[n - 1] - 4.0 * u[n - 2] + u[n - 3]) / (2.0 * d);
  return (u[i + 1] - u[i - 1]) / (2.0 * d);
}

}  // namespace

double energy(const ModeState& state, bool induced_weight) {
  return energy_between(state, 0, state.size() - 1, induced_weight);
}

double local_energy(const ModeState& state, double w1, double w2, bool induced_weight) {
  const Grid& g = state.grid();
  const double slack = 1e-9 * g.spacing();
  if (!(w1 <= w2) || w1 < g.lo - slack || w2 > g.hi + slack) {
    std::ostringstream msg;
    msg << "window [" << w1 << ", " << w2 << "] is not inside the grid [" << g.lo << ", " << g.hi << "]";
    throw Error(ErrorKind::WindowOutsideGrid, msg.str());
  }
  const double d = g.spacing();
  const auto i0 = static_cast<std::size_t>(std::max(0.0, std::ceil((w1 - g.lo) / d - 1e-9)));
  const auto i1 = std::min(g.n - 1, static_cast<std::size_t>(std::floor((w2 - g.lo) / d + 1e-9)));
  if (i1 <= i0) return 0.0;
  return energy_between(state, i0, i1, induced_weight);
}

MorawetzTerms morawetz(const ModeState& state, const ProfileSamples& p) {
  if (p.f.size() != state.size()) throw Error(ErrorKind::GridMismatch, "profile samples do not match the grid");
  const double d = state.grid().spacing();
  const auto& psi = state.psi();
  const auto& pi = state.pi();
  const std::size_t n = state.size();
  const bool complex_v = state.has_imaginary_part();
  MorawetzTerms t;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 * d : d;
    const Complex dpsi = derivative(psi, i, d);
    t.current += w * re_conj_mul(pi[i], p.f[i] * dpsi + 0.5 * p.d1[i] * psi[i]);
    t.bulk_gradient += w * p.d1[i] * std::norm(dpsi);
    t.bulk_field -= w * (0.25 * p.d3[i] + 0.5 * p.f[i] * state.v_real_drstar(i)) * std::norm(psi[i]);
    if (complex_v) t.imaginary -= w * p.f[i] * state.v_imag(i) * im_conj_mul(psi[i], dpsi);
  }
  return t;
}

double im_flux(const ModeState& state) {
  if (!state.has_imaginary_part()) return 0.0;
  const double d = state.grid().spacing();
  const std::size_t n = state.size();
  double f = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i == n - 1) ? 0.5 * d : d;
    f += w * state.v_imag(i) * im_conj_mul(state.psi()[i], state.pi()[i]);
  }
  return f;
}

double boundary_flux(const ModeState& state) {
  const double d = state.grid().spacing();
  const std::size_t n = state.size();
  const auto& psi = state.psi();
  const auto& pi = state.pi();
  return re_conj_mul(pi[n - 1], psi[n - 1] - psi[n - 2]) / d - re_conj_mul(pi[0], psi[1] - psi[0]) / d;
}

double boundary_node_energy(const ModeState& state) {
  const double d = state.grid().spacing();
  const std::size_t n = state.size();
  double e = 0.0;
  for (std::size_t i : {std::size_t{0}, n - 1})
    e += std::norm(state.pi()[i]) + state.v_real(i) * std::norm(state.psi()[i]);
  return 0.25 * d * e;
}

double order_n_energy(std::span<const double> energies, std::span<const int> multipoles, int n) {
  if (energies.size() != multipoles.size()) throw Error(ErrorKind::GridMismatch, "one energy per multipole");
  if (n < 0) throw Error(ErrorKind::InvalidSpec, "order must be >= 0");
  double sum = 0.0;
  for (std::size_t k = 0; k < energies.size(); ++k) {
    const double ll = static_cast<double>(multipoles[k]) * (multipoles[k] + 1);
    sum += std::pow(ll, n) * energies[k];
  }
  return sum;
}

double order_n_energy(std::span<const ModeState> modes, int n) {
  std::vector<double> energies;
  std::vector<int> ls;
  for (const auto& m : modes) {
    const auto& first = modes.front();
    if (!(m.grid() == first.grid()) || m.time() != first.time() || m.spec().mass != first.spec().mass) {
      std::ostringstream msg;
      msg << "mode l=" << m.spec().l << " does not share grid, time and mass with mode l=" << first.spec().l;
      throw Error(ErrorKind::GridMismatch, msg.str());
    }
    energies.push_back(energy(m));
    ls.push_back(m.spec().l);
  }
  return order_n_energy(energies, ls, n);
}

}  // namespace kerrlab::modewave
