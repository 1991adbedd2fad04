#include "sgrf/covariance.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sgrf/error.hpp"
#include "sgrf/parallel.hpp"

namespace sgrf {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClipFraction = 1e-10;
constexpr double kNoiseFraction = 1e-14;

// Gamma(-lambda) Gamma(1 + lambda). Multiplied by (-lambda)_m (1+lambda)_m
// this equals Gamma(1+lambda-m) Gamma(-lambda-m) for every integer m, which
// keeps the Green's function prefactor finite for large orders.
Complex gamma_pair(Complex lambda) { return -kPi / std::sin(kPi * lambda); }

// (-lambda)_m (1 + lambda)_m / (m!)^2
Complex rising_ratio(Complex lambda, int m) {
  Complex r = 1.0;
  for (int k = 0; k < m; ++k) {
    const double dk = k;
    r *= (dk - lambda) * (dk + 1.0 + lambda) / ((dk + 1.0) * (dk + 1.0));
  }
  return r;
}

// (m - lambda)_p (m + 1 + lambda)_p / (m + 1)_p: the extra Pochhammer factor
// of order m + p relative to order m.
Complex order_step(Complex lambda, int m, int p) {
  Complex h = 1.0;
  for (int k = 0; k < p; ++k) {
    const double mk = m + k;
    h *= (mk - lambda) * (mk + 1.0 + lambda) / (mk + 1.0);
  }
  return h;
}

double realify(Complex value) {
  if (std::abs(value.imag()) > 1e-8 * (1.0 + std::abs(value.real()))) {
    throw_numeric("covariance.imaginary",
                  "cross-covariance has imaginary part " + std::to_string(value.imag()) +
                      "; kappas must come in conjugate pairs");
  }
  return value.real();
}

// Sign and log of the ((1-z)/(1+z))^{mu/2} factors of
//   P^{m+p}(-z1) P^{m+q}(z2)      for z1 <= z2, with sign (-1)^p
//   P^{m+p}(z1)  P^{m+q}(-z2)     for z1 >  z2, with sign (-1)^q.
struct EntryGeometry {
  bool lower;
  double sign;
  double log_power;
};

EntryGeometry geometry(int m, int p, int q, double z1, double z2) {
  const double a1 = std::atanh(z1);
  const double a2 = std::atanh(z2);
  if (z1 <= z2) {
    return {true, (p % 2 == 0) ? 1.0 : -1.0, (m + p) * a1 - (m + q) * a2};
  }
  return {false, (q % 2 == 0) ? 1.0 : -1.0, -(m + p) * a1 + (m + q) * a2};
}

void check_open_interval(double z1, double z2) {
  if (!(z1 > -1.0 && z1 < 1.0 && z2 > -1.0 && z2 < 1.0)) {
    throw_usage("covariance.domain", "latitudes must lie strictly inside (-1, 1)");
  }
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Cholesky for a positive semi-definite matrix; pivots at or below `tol`
// zero their column.
Matrix semidefinite_cholesky(const Matrix& S, double tol) {
  const Eigen::Index n = S.rows();
  Matrix L = Matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = S(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= L(j, k) * L(j, k);
    if (d <= tol) continue;
    L(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = S(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      L(i, j) = s / L(j, j);
    }
  }
  return L;
}

}  // namespace

Complex green_function(int m, Complex lambda, double x, double y) {
  check_open_interval(x, y);
  const double lo = std::min(x, y);
  const double hi = std::max(x, y);
  const double log_power = m * (std::atanh(lo) - std::atanh(hi));
  return 0.5 * gamma_pair(lambda) * rising_ratio(lambda, m) * std::exp(log_power) *
         legendre_hyp2f1(lambda, m, 0.5 * (1.0 + lo)) *
         legendre_hyp2f1(lambda, m, 0.5 * (1.0 - hi));
}

double cross_covariance(const PowerSpectrum& spec, int m, int p, int q, double z1, double z2) {
  check_open_interval(z1, z2);
  if (m < 0 || p < 0 || q < 0) {
    throw_usage("covariance.index", "mode and component indices must be non-negative");
  }
  const EntryGeometry g = geometry(m, p, q, z1, z2);
  const double x1 = g.lower ? 0.5 * (1.0 + z1) : 0.5 * (1.0 - z1);
  const double x2 = g.lower ? 0.5 * (1.0 - z2) : 0.5 * (1.0 + z2);
  Complex sum = 0.0;
  for (std::size_t i = 0; i < spec.lambdas().size(); ++i) {
    const Complex lambda = spec.lambdas()[i];
    const Complex weight = spec.residues()[i] * gamma_pair(lambda) * rising_ratio(lambda, m) *
                           order_step(lambda, m, p) * order_step(lambda, m, q);
    sum += weight * legendre_hyp2f1(lambda, m + p, x1) * legendre_hyp2f1(lambda, m + q, x2);
  }
  return realify(sum * (g.sign * std::exp(g.log_power) / (4.0 * kPi)));
}

Matrix jmatrix(const PowerSpectrum& spec, int m, double z1, double z2) {
  const int order = spec.order();
  Matrix J(order, order);
  for (int p = 0; p < order; ++p) {
    for (int q = 0; q < order; ++q) {
      J(p, q) = cross_covariance(spec, m, p, q, z1, z2);
    }
  }
  return z1 == z2 ? symmetrized(J) : J;
}

Matrix psd_factor(const Matrix& S, double scale) {
  const Matrix sym = symmetrized(S);
  Eigen::LLT<Matrix> llt(sym);
  if (llt.info() == Eigen::Success) {
    const Matrix L = llt.matrixL();
    if (L.allFinite() && (L.diagonal().array() > 0.0).all()) return L;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  Eigen::VectorXd values = eig.eigenvalues();
  const double min_value = values.minCoeff();
  if (min_value < -kClipFraction * scale) {
    throw_numeric("covariance.indefinite",
                  "covariance has eigenvalue " + std::to_string(min_value) +
                      " below the tolerance -1e-10 * " + std::to_string(scale));
  }
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (values(k) < kNoiseFraction * scale) values(k) = 0.0;
  }
  const Matrix clipped =
      eig.eigenvectors() * values.asDiagonal() * eig.eigenvectors().transpose();
  return semidefinite_cholesky(symmetrized(clipped), kNoiseFraction * scale);
}

TransitionStep transition_step(const Matrix& J11, const Matrix& J12, const Matrix& J22) {
  const double scale = std::max(J22.trace(), 0.0);
  const Matrix sym11 = symmetrized(J11);
  Matrix gain;  // J11^{-1} J12
  Eigen::LLT<Matrix> llt(sym11);
  if (llt.info() == Eigen::Success) {
    gain = llt.solve(J12);
  } else {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym11);
    const double cutoff = 1e-13 * std::max(eig.eigenvalues().cwiseAbs().maxCoeff(), 1e-300);
    Eigen::VectorXd inv = eig.eigenvalues();
    for (Eigen::Index k = 0; k < inv.size(); ++k) {
      inv(k) = inv(k) > cutoff ? 1.0 / inv(k) : 0.0;
    }
    gain = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose() * J12;
  }
  TransitionStep step;
  step.A = gain.transpose();
  const Matrix schur = symmetrized(J22 - J12.transpose() * gain);
  step.B = psd_factor(schur, scale);
  return step;
}

LegendreTable::LegendreTable(const PowerSpectrum& spec, const LatitudeGrid& grid, int max_order,
                             int threads)
    : spec_(&spec), grid_(&grid), max_order_(max_order), rows_(grid.rows()) {
  const std::size_t degrees = spec.lambdas().size();
  const std::size_t orders = static_cast<std::size_t>(max_order + 1);
  values_.assign(degrees * orders * static_cast<std::size_t>(rows_), Complex(0.0));
  parallel_for(degrees * orders, threads, [&](std::size_t job) {
    const std::size_t i = job / orders;
    const int order = static_cast<int>(job % orders);
    const Complex lambda = spec.lambdas()[i];
    Complex* out = values_.data() + job * static_cast<std::size_t>(rows_);
    for (int row = 0; row < rows_; ++row) {
      out[row] = legendre_hyp2f1(lambda, order, 0.5 * (1.0 - grid.z[static_cast<std::size_t>(row)]));
    }
  });
}

Matrix LegendreTable::jmatrix(int m, int a, int b) const {
  const int order = spec_->order();
  if (m + order - 1 > max_order_) {
    throw_usage("covariance.index", "mode exceeds the cached Legendre orders");
  }
  const double z1 = grid_->z[static_cast<std::size_t>(a)];
  const double z2 = grid_->z[static_cast<std::size_t>(b)];
  const int mirror_a = rows_ - 1 - a;
  const int mirror_b = rows_ - 1 - b;

  const std::size_t degrees = spec_->lambdas().size();
  std::vector<Complex> base(degrees);
  std::vector<Complex> steps(degrees * static_cast<std::size_t>(order));
  for (std::size_t i = 0; i < degrees; ++i) {
    const Complex lambda = spec_->lambdas()[i];
    base[i] = spec_->residues()[i] * gamma_pair(lambda) * rising_ratio(lambda, m);
    for (int p = 0; p < order; ++p) {
      steps[i * static_cast<std::size_t>(order) + static_cast<std::size_t>(p)] =
          order_step(lambda, m, p);
    }
  }

  Matrix J(order, order);
  for (int p = 0; p < order; ++p) {
    for (int q = 0; q < order; ++q) {
      const EntryGeometry g = geometry(m, p, q, z1, z2);
      Complex sum = 0.0;
      for (std::size_t i = 0; i < degrees; ++i) {
        const Complex f1 = g.lower ? hyp(i, m + p, mirror_a) : hyp(i, m + p, a);
        const Complex f2 = g.lower ? hyp(i, m + q, b) : hyp(i, m + q, mirror_b);
        sum += base[i] * steps[i * static_cast<std::size_t>(order) + static_cast<std::size_t>(p)] *
               steps[i * static_cast<std::size_t>(order) + static_cast<std::size_t>(q)] * f1 * f2;
      }
      J(p, q) = realify(sum * (g.sign * std::exp(g.log_power) / (4.0 * kPi)));
    }
  }
  return a == b ? symmetrized(J) : J;
}

}  // namespace sgrf
