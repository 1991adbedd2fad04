#include "sgrf/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "sgrf/error.hpp"

namespace sgrf {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;

// Lanczos approximation, g = 607/128, 15 terms (Godfrey's coefficient set).
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczosCoeff = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    0.33994649984811888699e-4,
    0.46523628927048575665e-4,  -0.98374475304879564677e-4,
    0.15808870322491248884e-3,  -0.21026444172410488319e-3,
    0.21743961811521264320e-3,  -0.16431810653676389022e-3,
    0.84418223983852743293e-4,  -0.26190838401581408670e-4,
    0.36899182659531622704e-5,
};

bool near_nonpositive_integer(Complex z, double tol) {
  const double nearest = std::round(z.real());
  return nearest <= 0.0 && std::abs(z - Complex(nearest, 0.0)) < tol;
}

// log(sin(w)) modulo 2*pi*i, stable for large |Im w|.
Complex log_sin(Complex w) {
  const Complex i(0.0, 1.0);
  if (w.imag() > 20.0) {
    return std::log(i / 2.0) - i * w + std::log(1.0 - std::exp(2.0 * i * w));
  }
  if (w.imag() < -20.0) {
    return std::log(-i / 2.0) + i * w + std::log(1.0 - std::exp(-2.0 * i * w));
  }
  return std::log(std::sin(w));
}

Complex ln_gamma_right(Complex z) {
  const Complex zm1 = z - 1.0;
  Complex series = kLanczosCoeff[0];
  for (std::size_t k = 1; k < kLanczosCoeff.size(); ++k) {
    series += kLanczosCoeff[k] / (zm1 + static_cast<double>(k));
  }
  const Complex t = zm1 + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * kPi) + (zm1 + 0.5) * std::log(t) - t +
         std::log(series);
}

Complex digamma_right(Complex z) {
  Complex shift = 0.0;
  while (std::abs(z) < 12.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  // Asymptotic expansion, Bernoulli numbers B_2 ... B_14.
  const Complex tail =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 -
                      inv2 * (1.0 / 252.0 -
                              inv2 * (1.0 / 240.0 -
                                      inv2 * (1.0 / 132.0 -
                                              inv2 * (691.0 / 32760.0 -
                                                      inv2 / 12.0))))));
  return shift + std::log(z) - 0.5 * inv - tail;
}

}  // namespace

Complex ln_gamma(Complex z) {
  if (near_nonpositive_integer(z, 1e-12)) {
    throw_numeric("gamma.pole", "log-Gamma evaluated at a pole (z = " +
                                    std::to_string(z.real()) + ")");
  }
  if (z.real() < 0.5) {
    return std::log(kPi) - log_sin(kPi * z) - ln_gamma_right(1.0 - z);
  }
  return ln_gamma_right(z);
}

Complex digamma(Complex z) {
  if (near_nonpositive_integer(z, 1e-12)) {
    throw_numeric("gamma.pole", "digamma evaluated at a pole");
  }
  if (z.real() < 0.5) {
    return digamma_right(1.0 - z) - kPi / std::tan(kPi * z);
  }
  return digamma_right(z);
}

Complex pochhammer(Complex x, unsigned n) {
  Complex product = 1.0;
  for (unsigned k = 0; k < n; ++k) {
    product *= x + static_cast<double>(k);
  }
  return product;
}

SeriesResult gauss_2f1(Complex a, Complex b, Complex c, double x,
                       std::size_t max_terms) {
  if (!(x >= 0.0 && x < 1.0)) {
    throw_usage("hyp2f1.domain", "2F1 series requires 0 <= x < 1");
  }
  if (near_nonpositive_integer(c, 1e-12)) {
    throw_usage("hyp2f1.domain", "2F1 parameter c is a non-positive integer");
  }

  SeriesResult result{Complex(0.0), 0};
  Complex term = 1.0;
  int quiet_terms = 0;
  for (std::size_t n = 0; n < max_terms; ++n) {
    result.value += term;
    result.terms = n + 1;
    const double dn = static_cast<double>(n);
    const Complex next = term * (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * x;
    if (next == Complex(0.0)) {
      return result;
    }
    const double ratio = std::abs(next) / std::abs(term);
    const double rho = std::max(ratio, x);
    if (rho < 1.0) {
      const double tail = std::abs(next) / (1.0 - rho);
      quiet_terms = tail <= 1e-15 * std::abs(result.value) ? quiet_terms + 1 : 0;
      if (quiet_terms >= 2) {
        return result;
      }
    } else {
      quiet_terms = 0;
    }
    term = next;
  }
  throw_numeric("hyp2f1.no_convergence",
                "2F1 series did not converge within " +
                    std::to_string(max_terms) + " terms (x = " +
                    std::to_string(x) + ")");
}

Complex legendre_hyp2f1(Complex lambda, int order, double x) {
  if (order < 0) {
    throw_usage("hyp2f1.domain", "Legendre order must be non-negative");
  }
  if (x <= 0.5) {
    return gauss_2f1(-lambda, lambda + 1.0, Complex(1.0 + order), x).value;
  }
  if (!(x < 1.0)) {
    throw_usage("hyp2f1.domain", "2F1 argument must be below 1");
  }

  // c = a + b + order with a = -lambda, b = 1 + lambda.
  const Complex a = -lambda;
  const Complex b = 1.0 + lambda;
  const double w = 1.0 - x;
  const int mu = order;
  // 1 / (Gamma(-lambda) Gamma(1 + lambda))
  const Complex inv_gamma_pair = -std::sin(kPi * lambda) / kPi;

  Complex finite_part = 0.0;
  if (mu >= 1) {
    // (-lambda)_mu (1 + lambda)_mu / (mu!)^2
    Complex ratio = 1.0;
    for (int k = 0; k < mu; ++k) {
      const double dk = k;
      ratio *= (dk - lambda) * (dk + 1.0 + lambda) / ((dk + 1.0) * (dk + 1.0));
    }
    Complex sum = 0.0;
    Complex term = 1.0;
    for (int n = 0; n < mu; ++n) {
      sum += term;
      if (n + 1 < mu) {
        const double dn = n;
        term *= (a + dn) * (b + dn) / ((dn + 1.0) * (1.0 - mu + dn)) * w;
      }
    }
    finite_part = inv_gamma_pair / (static_cast<double>(mu) * ratio) * sum;
  }

  double psi_n1 = -kEulerGamma;  // psi(n + 1)
  double psi_nmu1 = -kEulerGamma;  // psi(n + mu + 1)
  for (int k = 1; k <= mu; ++k) {
    psi_nmu1 += 1.0 / k;
  }
  Complex psi_a = digamma(a + static_cast<double>(mu));
  Complex psi_b = digamma(b + static_cast<double>(mu));
  const double log_w = std::log(w);

  Complex sum = 0.0;
  Complex coeff = 1.0;
  bool converged = false;
  for (int n = 0; n < 100000; ++n) {
    const Complex term = coeff * (log_w - psi_n1 - psi_nmu1 + psi_a + psi_b);
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) || coeff == Complex(0.0)) {
      converged = true;
      break;
    }
    const double dn = n;
    const Complex am = a + static_cast<double>(mu) + dn;
    const Complex bm = b + static_cast<double>(mu) + dn;
    coeff *= am * bm / ((dn + 1.0) * (mu + 1.0 + dn)) * w;
    psi_n1 += 1.0 / (dn + 1.0);
    psi_nmu1 += 1.0 / (dn + mu + 1.0);
    psi_a += 1.0 / am;
    psi_b += 1.0 / bm;
  }
  if (!converged) {
    throw_numeric("hyp2f1.no_convergence",
                  "2F1 connection series did not converge");
  }
  const double sign = (mu % 2 == 0) ? -1.0 : 1.0;
  const Complex log_part = sign * std::pow(w, mu) * inv_gamma_pair * sum;
  return finite_part + log_part;
}

Complex assoc_legendre_general(Complex lambda, int m, double z) {
  if (m < 0) {
    throw_usage("legendre.domain", "Legendre order must be non-negative");
  }
  if (!(z > -1.0 && z <= 1.0)) {
    throw_numeric("legendre.domain",
                  "P^m_lambda is singular at z = -1 and undefined beyond");
  }
  if (z == 1.0) {
    return m == 0 ? Complex(1.0) : Complex(0.0);
  }
  Complex coeff = 1.0;
  for (int k = 0; k < m; ++k) {
    const double dk = k;
    coeff *= (dk - lambda) * (1.0 + lambda + dk) / (dk + 1.0);
  }
  const double power = std::pow((1.0 - z) / (1.0 + z), 0.5 * m);
  return coeff * power * legendre_hyp2f1(lambda, m, 0.5 * (1.0 - z));
}

double legendre_p(int l, double x) {
  if (l <= 0) return 1.0;
  double prev = 1.0;
  double curr = x;
  for (int k = 1; k < l; ++k) {
    const double next = ((2.0 * k + 1.0) * x * curr - k * prev) / (k + 1.0);
    prev = curr;
    curr = next;
  }
  return curr;
}

std::vector<double> normalized_assoc_legendre_row(int m, int l_max, double z) {
  if (m < 0 || l_max < m) {
    throw_usage("legendre.domain", "normalized Legendre row needs 0 <= m <= l_max");
  }
  std::vector<double> row(static_cast<std::size_t>(l_max - m + 1), 0.0);
  const double sine = std::sqrt(std::max(0.0, (1.0 - z) * (1.0 + z)));

  double diag = 1.0 / std::sqrt(4.0 * kPi);
  for (int k = 1; k <= m; ++k) {
    diag *= -std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * sine;
  }
  row[0] = diag;
  if (l_max == m) return row;
  row[1] = std::sqrt(2.0 * m + 3.0) * z * diag;

  const double mm = static_cast<double>(m) * m;
  for (int l = m + 2; l <= l_max; ++l) {
    const double ll = static_cast<double>(l) * l;
    const double a = std::sqrt((4.0 * ll - 1.0) / (ll - mm));
    const double lm1 = l - 1.0;
    const double b = std::sqrt((lm1 * lm1 - mm) / (4.0 * lm1 * lm1 - 1.0));
    const auto idx = static_cast<std::size_t>(l - m);
    row[idx] = a * (z * row[idx - 1] - b * row[idx - 2]);
  }
  return row;
}

}  // namespace sgrf
