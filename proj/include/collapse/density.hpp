#pragma once

#include <complex>
#include <vector>

#include "collapse/state.hpp"

namespace collapse {

// Dense n x n density matrix in the grid basis, row-major.  Physical states
// are Hermitian, unit-trace and positive semidefinite; the checks below
// report how far a matrix has drifted from that manifold.
struct DensityState {
  int n = 0;
  std::vector<std::complex<double>> m;
  double time = 0.0;

  static DensityState zero(int n);
  static DensityState from_wave(const WaveState& state);

  std::complex<double>& at(int i, int j) { return m[i * n + j]; }
  const std::complex<double>& at(int i, int j) const { return m[i * n + j]; }

  double trace_real() const;
  // max_ij |rho_ij - conj(rho_ji)|
  double hermiticity_residue() const;
  // smallest eigenvalue of the Hermitian part
  double min_eigenvalue() const;
  double purity() const;  // Re tr(rho^2)
};

// (1/2) tr |a - b|, via the eigenvalues of the Hermitian part of a - b.
double trace_distance(const DensityState& a, const DensityState& b);

}  // namespace collapse
