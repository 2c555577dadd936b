#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "collapse/constants.hpp"
#include "collapse/grid.hpp"

namespace collapse {

// Discretized single-particle wavefunction.  amplitudes[i] multiplies the
// grid basis vector |x_i>; the Euclidean norm is kept at 1, so |psi_i|^2 is
// the probability of site i (no dx weight).
struct WaveState {
  std::vector<std::complex<double>> amplitudes;
  double time = 0.0;

  int size() const { return static_cast<int>(amplitudes.size()); }
  double norm() const;
  void renormalize();  // throws NumericalBlowup on a zero vector
};

// Normalized Gaussian packet exp(-(x-center)^2/4 sigma^2 + i k0 x).
// sigma is the position-space standard deviation.
WaveState gaussian_packet(const GridSpec& grid, double center, double sigma,
                          double k0 = 0.0);

// (|x_i> + |x_j>)/sqrt(2).
WaveState two_point_superposition(const GridSpec& grid, int i, int j);

// |x_i>.
WaveState point_state(const GridSpec& grid, int i);

// exp(2 pi i k j / n)/sqrt(n): an exact eigenvector of the periodic
// kinetic stencil.
WaveState plane_wave(const GridSpec& grid, int mode);

// Mass density operator restricted to the grid: site i carries the point
// mass site_mass[i], i.e. the smeared density operator collapses to
// (site_mass[i]/dx) |x_i><x_i| under the grid delta convention.  The 1/dx
// cancels against the dx of the noise-field inner product, so only
// site_mass enters the dynamics.
struct MassDensityOperator {
  std::vector<double> site_mass;  // [kg]

  static MassDensityOperator point_particle(const GridSpec& grid, double mass);

  void validate(const GridSpec& grid) const;
};

// H = p^2/2m + V with the periodic three-point kinetic stencil
// (p^2 psi)_i = -hbar^2 (psi_{i+1} - 2 psi_i + psi_{i-1})/dx^2.
// A default-constructed Hamiltonian (has_kinetic = false, empty potential)
// is the zero operator: pure collapse dynamics.
class Hamiltonian {
 public:
  // The zero operator still carries hbar: measure() scales the momentum
  // observable by it even when no dynamics are generated.
  static Hamiltonian zero(const GridSpec& grid,
                          const PhysicalConstants& c = kCodata2018);
  static Hamiltonian free_particle(const GridSpec& grid, double mass,
                                   const PhysicalConstants& c = kCodata2018);
  static Hamiltonian with_potential(const GridSpec& grid, double mass,
                                    std::vector<double> potential_j,
                                    const PhysicalConstants& c = kCodata2018);

  const GridSpec& grid() const { return grid_; }
  bool has_kinetic() const { return has_kinetic_; }
  double mass() const { return mass_; }
  double hbar() const { return hbar_; }
  const std::vector<double>& potential() const { return potential_; }
  bool is_zero() const { return !has_kinetic_ && potential_.empty(); }

  // out = (H psi) / hbar, in angular-frequency units [s^-1].
  void apply_over_hbar(std::span<const std::complex<double>> psi,
                       std::span<std::complex<double>> out) const;

  // Largest |eigenvalue| of H on the grid [J]; 0 for the zero operator.
  double spectral_bound() const;

 private:
  GridSpec grid_;
  bool has_kinetic_ = false;
  double mass_ = 0.0;
  double hbar_ = 0.0;
  std::vector<double> potential_;
};

// Expectation values in a unit-norm state.  mean_p2 uses the same stencil
// as the Hamiltonian; energy = <H>; coherence is <x_a| rho |x_b> for the
// requested site pair.
struct Observables {
  double mean_x = 0.0;
  double mean_x2 = 0.0;   // second moment of position about the box center
  double mean_p2 = 0.0;
  double energy = 0.0;
  std::complex<double> coherence;
};

Observables measure(const WaveState& state, const Hamiltonian& h,
                    std::pair<int, int> coherence_pair);

}  // namespace collapse
