#include "collapse/state.hpp"

#include <cmath>
#include <numbers>

#include "collapse/errors.hpp"

namespace collapse {

double WaveState::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

void WaveState::renormalize() {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n))
    throw NumericalBlowup("cannot renormalize state with norm " +
                          std::to_string(n));
  const double inv = 1.0 / n;
  for (auto& a : amplitudes) a *= inv;
}

WaveState gaussian_packet(const GridSpec& grid, double center, double sigma,
                          double k0) {
  grid.validate();
  if (!(sigma > 0.0)) throw InvalidParameter("sigma must be > 0");
  WaveState s;
  s.amplitudes.resize(grid.n_points);
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid.position(i) - center;
    const double envelope = std::exp(-x * x / (4.0 * sigma * sigma));
    const double phase = k0 * grid.position(i);
    s.amplitudes[i] =
        envelope * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  s.renormalize();
  return s;
}

WaveState two_point_superposition(const GridSpec& grid, int i, int j) {
  grid.validate();
  if (i < 0 || i >= grid.n_points || j < 0 || j >= grid.n_points || i == j)
    throw InvalidParameter("superposition sites must be distinct grid indices");
  WaveState s;
  s.amplitudes.assign(grid.n_points, 0.0);
  const double a = 1.0 / std::numbers::sqrt2;
  s.amplitudes[i] = a;
  s.amplitudes[j] = a;
  return s;
}

WaveState point_state(const GridSpec& grid, int i) {
  grid.validate();
  if (i < 0 || i >= grid.n_points)
    throw InvalidParameter("site index out of range");
  WaveState s;
  s.amplitudes.assign(grid.n_points, 0.0);
  s.amplitudes[i] = 1.0;
  return s;
}

WaveState plane_wave(const GridSpec& grid, int mode) {
  grid.validate();
  WaveState s;
  const int n = grid.n_points;
  s.amplitudes.resize(n);
  const double a = 1.0 / std::sqrt(static_cast<double>(n));
  for (int j = 0; j < n; ++j) {
    const double phase = 2.0 * std::numbers::pi * mode * j / n;
    s.amplitudes[j] =
        a * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return s;
}

MassDensityOperator MassDensityOperator::point_particle(const GridSpec& grid,
                                                        double mass) {
  grid.validate();
  if (!(mass > 0.0)) throw InvalidParameter("mass must be > 0");
  MassDensityOperator m;
  m.site_mass.assign(grid.n_points, mass);
  return m;
}

void MassDensityOperator::validate(const GridSpec& grid) const {
  if (static_cast<int>(site_mass.size()) != grid.n_points)
    throw GridMismatch("mass density operator does not match grid size");
  for (double m : site_mass)
    if (!(m >= 0.0) || !std::isfinite(m))
      throw InvalidParameter("site masses must be finite and >= 0");
}

Hamiltonian Hamiltonian::zero(const GridSpec& grid,
                              const PhysicalConstants& c) {
  grid.validate();
  Hamiltonian h;
  h.grid_ = grid;
  h.hbar_ = c.hbar;
  return h;
}

Hamiltonian Hamiltonian::free_particle(const GridSpec& grid, double mass,
                                       const PhysicalConstants& c) {
  grid.validate();
  c.validate();
  if (!(mass > 0.0)) throw InvalidParameter("mass must be > 0");
  Hamiltonian h;
  h.grid_ = grid;
  h.has_kinetic_ = true;
  h.mass_ = mass;
  h.hbar_ = c.hbar;
  return h;
}

Hamiltonian Hamiltonian::with_potential(const GridSpec& grid, double mass,
                                        std::vector<double> potential_j,
                                        const PhysicalConstants& c) {
  Hamiltonian h = free_particle(grid, mass, c);
  if (static_cast<int>(potential_j.size()) != grid.n_points)
    throw GridMismatch("potential does not match grid size");
  h.potential_ = std::move(potential_j);
  return h;
}

void Hamiltonian::apply_over_hbar(std::span<const std::complex<double>> psi,
                                  std::span<std::complex<double>> out) const {
  const int n = grid_.n_points;
  if (static_cast<int>(psi.size()) != n || static_cast<int>(out.size()) != n)
    throw DimensionMismatch("state does not match grid size");
  if (is_zero()) {
    for (int i = 0; i < n; ++i) out[i] = 0.0;
    return;
  }
  const double kin =
      has_kinetic_ ? hbar_ / (2.0 * mass_ * grid_.dx * grid_.dx) : 0.0;
  const bool pot = !potential_.empty();
  for (int i = 0; i < n; ++i) {
    std::complex<double> v = 0.0;
    if (has_kinetic_) {
      const std::complex<double>& left = psi[(i + n - 1) % n];
      const std::complex<double>& right = psi[(i + 1) % n];
      v = -kin * (right - 2.0 * psi[i] + left);
    }
    if (pot) v += (potential_[i] / hbar_) * psi[i];
    out[i] = v;
  }
}

double Hamiltonian::spectral_bound() const {
  double bound = 0.0;
  if (has_kinetic_)
    bound += 4.0 * hbar_ * hbar_ / (2.0 * mass_ * grid_.dx * grid_.dx);
  double vmax = 0.0;
  for (double v : potential_) vmax = std::max(vmax, std::fabs(v));
  return bound + vmax;
}

Observables measure(const WaveState& state, const Hamiltonian& h,
                    std::pair<int, int> coherence_pair) {
  const GridSpec& grid = h.grid();
  const int n = grid.n_points;
  if (state.size() != n)
    throw GridMismatch("state does not match hamiltonian grid");
  if (coherence_pair.first < 0 || coherence_pair.first >= n ||
      coherence_pair.second < 0 || coherence_pair.second >= n)
    throw InvalidParameter("coherence pair indices out of range");

  Observables o;
  for (int i = 0; i < n; ++i) {
    const double p = std::norm(state.amplitudes[i]);
    const double x = grid.position(i);
    o.mean_x += x * p;
    o.mean_x2 += x * x * p;
  }

  // <p^2> from the kinetic stencil, independent of whether H has one.
  const double hb = h.hbar();
  double p2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::complex<double>& left = state.amplitudes[(i + n - 1) % n];
    const std::complex<double>& right = state.amplitudes[(i + 1) % n];
    const std::complex<double> lap = right - 2.0 * state.amplitudes[i] + left;
    p2 -= (std::conj(state.amplitudes[i]) * lap).real();
  }
  o.mean_p2 = p2 * hb * hb / (grid.dx * grid.dx);

  if (h.is_zero()) {
    o.energy = 0.0;
  } else {
    double e = h.has_kinetic() ? o.mean_p2 / (2.0 * h.mass()) : 0.0;
    if (!h.potential().empty())
      for (int i = 0; i < n; ++i)
        e += h.potential()[i] * std::norm(state.amplitudes[i]);
    o.energy = e;
  }

  o.coherence = state.amplitudes[coherence_pair.first] *
                std::conj(state.amplitudes[coherence_pair.second]);
  return o;
}

}  // namespace collapse
