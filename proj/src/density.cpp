#include "collapse/density.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "collapse/errors.hpp"

namespace collapse {
namespace {

Eigen::MatrixXcd hermitian_part(const DensityState& r) {
  Eigen::MatrixXcd h(r.n, r.n);
  for (int i = 0; i < r.n; ++i)
    for (int j = 0; j < r.n; ++j)
      h(i, j) = 0.5 * (r.at(i, j) + std::conj(r.at(j, i)));
  return h;
}

}  // namespace

DensityState DensityState::zero(int n) {
  if (n < 1) throw InvalidParameter("density matrix size must be >= 1");
  DensityState r;
  r.n = n;
  r.m.assign(static_cast<std::size_t>(n) * n, 0.0);
  return r;
}

DensityState DensityState::from_wave(const WaveState& state) {
  DensityState r = zero(state.size());
  r.time = state.time;
  for (int i = 0; i < r.n; ++i)
    for (int j = 0; j < r.n; ++j)
      r.at(i, j) = state.amplitudes[i] * std::conj(state.amplitudes[j]);
  return r;
}

double DensityState::trace_real() const {
  double t = 0.0;
  for (int i = 0; i < n; ++i) t += at(i, i).real();
  return t;
}

double DensityState::hermiticity_residue() const {
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j)
      worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
  return worst;
}

double DensityState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      hermitian_part(*this), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityState::purity() const {
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      s += (at(i, j) * at(j, i)).real();
  return s;
}

double trace_distance(const DensityState& a, const DensityState& b) {
  if (a.n != b.n) throw DimensionMismatch("density matrix sizes differ");
  DensityState d = DensityState::zero(a.n);
  for (std::size_t k = 0; k < d.m.size(); ++k) d.m[k] = a.m[k] - b.m[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      hermitian_part(d), Eigen::EigenvaluesOnly);
  return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

}  // namespace collapse
