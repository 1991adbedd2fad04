#pragma once

#include <span>
#include <vector>

#include "sgrf/specfun.hpp"

namespace sgrf {

/// Root lambda of lambda^2 + lambda + kappa = 0 with Re lambda >= -1/2
/// (ties broken by Im lambda >= 0).
/// Throws Error("spectrum.integer_lambda") when lambda is within 1e-9 of an
/// integer, since C_l then has a pole at a non-negative degree.
Complex lambda_from_kappa(Complex kappa);

/// Partial-fraction residues b_i = prod_{j != i} 1/(kappa_j - kappa_i), so
/// that prod_i 1/(x + kappa_i) = sum_i b_i/(x + kappa_i).
/// Throws Error("spectrum.duplicate_kappa") if two kappas coincide.
std::vector<Complex> residues(std::span<const Complex> kappas);

/// Angular power spectrum C_l = amplitude * prod_i (kappa_i + l(l+1))^{-1}
/// together with its partial-fraction form
/// C_l = amplitude * sum_i b_i / (l(l+1) - lambda_i(lambda_i + 1)).
///
/// Construction validates: distinct kappas, non-integer lambdas, non-real
/// kappas in conjugate pairs, and real positive C_l for l = 0..64.
/// Immutable once built.
class PowerSpectrum {
 public:
  static PowerSpectrum from_kappas(std::vector<Complex> kappas, double amplitude = 1.0);

  /// The M = 2 family C_l = (a^2 + l^2 (l+1)^2)^{-1}, kappa = (i a, -i a).
  static PowerSpectrum from_squared_amplitude(double a_squared, double amplitude = 1.0);

  int order() const noexcept { return static_cast<int>(kappas_.size()); }
  double amplitude() const noexcept { return amplitude_; }
  std::span<const Complex> kappas() const noexcept { return kappas_; }
  std::span<const Complex> lambdas() const noexcept { return lambdas_; }
  /// Residues b_i already multiplied by the amplitude.
  std::span<const Complex> residues() const noexcept { return residues_; }

  /// C_l from the product form (complex arithmetic, before taking Re).
  Complex product_form(int l) const;
  /// C_l from the partial-fraction form.
  Complex partial_fraction_form(int l) const;

  friend bool operator==(const PowerSpectrum&, const PowerSpectrum&) = default;

 private:
  PowerSpectrum() = default;

  double amplitude_ = 1.0;
  std::vector<Complex> kappas_;
  std::vector<Complex> lambdas_;
  std::vector<Complex> residues_;
};

/// Re C_l by the product form, checked against the partial-fraction form to
/// 1e-10 relative (plus the rounding floor of the partial-fraction sum).
double angular_power(const PowerSpectrum& spec, int l);

}  // namespace sgrf
