#pragma once

// Cross-covariances J^m_{pq}(z1, z2) of the azimuthal modes g_m and their
// transformed derivative components, computed from the closed-form Green's
// function of (kappa - L_m), plus the conditional-Gaussian step matrices.
//
// The p-th state component is U^p_m g_m, where
//   U^p_m f = (-1)^p (1-x^2)^{(m+p)/2} d^p/dx^p [(1-x^2)^{-m/2} f],
// so that U^p_m P^m_lambda = P^{m+p}_lambda. Raw derivatives are never formed.

#include <Eigen/Dense>
#include <vector>

#include "sgrf/grid.hpp"
#include "sgrf/spectrum.hpp"

namespace sgrf {

using Matrix = Eigen::MatrixXd;

/// Green's function of (-lambda(lambda+1) - L_m) on (-1, 1):
///   G(x, y) = 1/2 Gamma(1+lambda-m) Gamma(-lambda-m) P^m_lambda(-min) P^m_lambda(max).
Complex green_function(int m, Complex lambda, double x, double y);

/// J^m_{pq}(z1, z2) for the (transformed) derivative components p, q.
/// p = q = 0 gives the mode covariance E[conj(g_m(z1)) g_m(z2)].
/// Throws Error("covariance.imaginary") if the spectrum sum is not real,
/// which signals a spectrum that is not closed under conjugation.
double cross_covariance(const PowerSpectrum& spec, int m, int p, int q, double z1, double z2);

/// M x M matrix [J^m_{pq}(z1, z2)]; symmetrized when z1 == z2.
Matrix jmatrix(const PowerSpectrum& spec, int m, double z1, double z2);

struct TransitionStep {
  Matrix A;  // conditional mean map: E[g(z2) | g(z1)] = A g(z1)
  Matrix B;  // lower-triangular, B B^T = conditional covariance
};

/// Conditional law of the state at z2 given the state at z1, from the blocks
/// J11 = J(z1, z1), J12 = J(z1, z2), J22 = J(z2, z2):
///   A = J12^T J11^{-1},  B B^T = J22 - J12^T J11^{-1} J12.
/// Small negative eigenvalues of the Schur complement (>= -1e-8 trace(J22))
/// are clipped to zero; anything more negative throws
/// Error("covariance.indefinite").
TransitionStep transition_step(const Matrix& J11, const Matrix& J12, const Matrix& J22);

/// Lower-triangular L with L L^T = S for symmetric positive semi-definite S.
/// `scale` sets the clipping threshold as in transition_step.
Matrix psd_factor(const Matrix& S, double scale);

/// Cache of the hypergeometric factors F_i(mu, (1 - z_k)/2) for every degree
/// lambda_i, order mu = 0..max_order and grid latitude z_k; each value is
/// computed exactly once and shared by every J^m that needs it.
class LegendreTable {
 public:
  LegendreTable(const PowerSpectrum& spec, const LatitudeGrid& grid, int max_order,
                int threads = 1);

  /// J^m(z_a, z_b) for grid row indices a, b in [0, 2n].
  Matrix jmatrix(int m, int a, int b) const;

  int max_order() const noexcept { return max_order_; }

 private:
  Complex hyp(std::size_t i, int order, int row) const {
    return values_[(i * static_cast<std::size_t>(max_order_ + 1) + static_cast<std::size_t>(order)) *
                       static_cast<std::size_t>(rows_) +
                   static_cast<std::size_t>(row)];
  }

  const PowerSpectrum* spec_;
  const LatitudeGrid* grid_;
  int max_order_;
  int rows_;
  std::vector<Complex> values_;
};

}  // namespace sgrf
