#pragma once

// Complex special functions: log-Gamma, digamma, Pochhammer symbols, the
// Gauss hypergeometric series and associated Legendre functions of complex
// degree and integer order. Integer-degree Legendre utilities are used by
// the series oracles in validate and the tests.

#include <complex>
#include <cstddef>
#include <vector>

namespace sgrf {

using Complex = std::complex<double>;

/// log Gamma(z). For Re z >= 1/2 this is the principal branch; for
/// Re z < 1/2 the reflection formula is used and the result agrees with the
/// principal branch modulo 2*pi*i.
/// Throws Error("gamma.pole") within 1e-12 of a non-positive integer.
Complex ln_gamma(Complex z);

/// Digamma psi(z) = Gamma'(z)/Gamma(z).
Complex digamma(Complex z);

/// Rising factorial x (x+1) ... (x+n-1); (x)_0 = 1.
Complex pochhammer(Complex x, unsigned n);

struct SeriesResult {
  Complex value;
  std::size_t terms = 0;
};

inline constexpr std::size_t kDefaultMaxSeriesTerms = 2'000'000;

/// Direct power series for 2F1(a, b; c; x), 0 <= x < 1.
///
/// Summation stops once the estimated tail drops below 1e-15 of the partial
/// sum on two consecutive terms. Hitting `max_terms` first throws
/// Error("hyp2f1.no_convergence"): x is too close to 1 for a direct sum.
SeriesResult gauss_2f1(Complex a, Complex b, Complex c, double x,
                       std::size_t max_terms = kDefaultMaxSeriesTerms);

/// 2F1(-lambda, lambda + 1; 1 + order; x) for 0 <= x < 1.
///
/// Uses the direct series for x <= 1/2 and the logarithmic 1 - x connection
/// formula (c - a - b = order is an integer) above, so the cost stays bounded
/// as x -> 1. lambda must not be an integer.
Complex legendre_hyp2f1(Complex lambda, int order, double x);

/// Associated Legendre function P^m_lambda(z) of complex degree lambda and
/// integer order m >= 0 (Ferrers convention, z in (-1, 1]):
///
///   P^m_lambda(z) = (-lambda)_m (1 + lambda)_m / m!
///                   * ((1 - z)/(1 + z))^{m/2}
///                   * 2F1(-lambda, lambda + 1; 1 + m; (1 - z)/2).
///
/// P^m_lambda(1) = delta_{m0}. Throws Error("legendre.domain") for z <= -1
/// or z > 1, where the function is singular or undefined.
Complex assoc_legendre_general(Complex lambda, int m, double z);

/// Legendre polynomial P_l(x) by the three-term recurrence.
double legendre_p(int l, double x);

/// Fully normalized associated Legendre values
/// (L_{m m}(z), ..., L_{l_max m}(z)) with
/// L_{l m} = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!) P_{l m}, including the
/// Condon-Shortley phase (-1)^m of P_{l m}.
std::vector<double> normalized_assoc_legendre_row(int m, int l_max, double z);

}  // namespace sgrf
