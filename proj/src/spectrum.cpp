#include "sgrf/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sgrf/error.hpp"

namespace sgrf {
namespace {

constexpr int kPositivityCheckDegree = 64;

std::string format_complex(Complex z) {
  std::ostringstream out;
  out.precision(17);
  out << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  return out.str();
}

void check_conjugate_pairs(std::span<const Complex> kappas) {
  for (const Complex kappa : kappas) {
    const double scale = 1.0 + std::abs(kappa);
    if (std::abs(kappa.imag()) <= 1e-14 * scale) continue;
    const bool has_partner = std::any_of(kappas.begin(), kappas.end(), [&](Complex other) {
      return std::abs(other - std::conj(kappa)) <= 1e-12 * scale;
    });
    if (!has_partner) {
      throw_numeric("spectrum.not_conjugate",
                    "kappa " + format_complex(kappa) +
                        " has no conjugate partner; the field would not be real");
    }
  }
}

}  // namespace

Complex lambda_from_kappa(Complex kappa) {
  Complex root = std::sqrt(1.0 - 4.0 * kappa);
  if (root.real() == 0.0 && root.imag() < 0.0) root = -root;
  const Complex lambda = 0.5 * (root - 1.0);
  const double nearest = std::round(lambda.real());
  if (std::abs(lambda - Complex(nearest, 0.0)) < 1e-9) {
    throw_numeric("spectrum.integer_lambda",
                  "kappa " + format_complex(kappa) + " gives degree lambda = " +
                      format_complex(lambda) +
                      ", which must not be an integer (C_l would be singular)");
  }
  return lambda;
}

std::vector<Complex> residues(std::span<const Complex> kappas) {
  double scale = 0.0;
  for (const Complex k : kappas) scale = std::max(scale, std::abs(k));
  std::vector<Complex> out(kappas.size(), Complex(1.0));
  for (std::size_t i = 0; i < kappas.size(); ++i) {
    for (std::size_t j = 0; j < kappas.size(); ++j) {
      if (i == j) continue;
      const Complex gap = kappas[j] - kappas[i];
      if (std::abs(gap) <= 1e-12 * scale) {
        throw_numeric("spectrum.duplicate_kappa",
                      "kappa values must be distinct; got " + format_complex(kappas[i]) +
                          " twice");
      }
      out[i] /= gap;
    }
  }
  return out;
}

PowerSpectrum PowerSpectrum::from_kappas(std::vector<Complex> kappas, double amplitude) {
  if (kappas.empty()) {
    throw_usage("spectrum.empty", "at least one kappa is required");
  }
  if (!std::isfinite(amplitude) || amplitude < 0.0) {
    throw_usage("spectrum.amplitude", "amplitude must be finite and non-negative");
  }
  for (const Complex k : kappas) {
    if (!std::isfinite(k.real()) || !std::isfinite(k.imag())) {
      throw_usage("spectrum.not_finite", "kappa values must be finite");
    }
  }

  PowerSpectrum spec;
  spec.amplitude_ = amplitude;
  spec.residues_ = sgrf::residues(kappas);
  for (Complex& b : spec.residues_) b *= amplitude;
  check_conjugate_pairs(kappas);
  for (const Complex k : kappas) {
    const Complex lambda = lambda_from_kappa(k);
    if (std::abs(lambda * (lambda + 1.0) + k) > 1e-12 * std::max(1.0, std::abs(k))) {
      throw_numeric("spectrum.root", "inaccurate degree for kappa " + format_complex(k));
    }
    spec.lambdas_.push_back(lambda);
  }
  spec.kappas_ = std::move(kappas);

  for (int l = 0; l <= kPositivityCheckDegree; ++l) {
    Complex c = 1.0;
    const double x = static_cast<double>(l) * (l + 1);
    for (const Complex k : spec.kappas_) c /= k + x;
    if (!(c.real() > 0.0) || std::abs(c.imag()) > 1e-10 * std::abs(c.real())) {
      throw_numeric("spectrum.not_positive",
                    "C_l must be real and positive; fails at l = " + std::to_string(l));
    }
  }
  return spec;
}

PowerSpectrum PowerSpectrum::from_squared_amplitude(double a_squared, double amplitude) {
  if (!(a_squared > 0.0) || !std::isfinite(a_squared)) {
    throw_usage("spectrum.squared_amplitude", "squared amplitude must be positive");
  }
  const double a = std::sqrt(a_squared);
  return from_kappas({Complex(0.0, a), Complex(0.0, -a)}, amplitude);
}

Complex PowerSpectrum::product_form(int l) const {
  const double x = static_cast<double>(l) * (l + 1);
  Complex c = amplitude_;
  for (const Complex k : kappas_) c /= k + x;
  return c;
}

Complex PowerSpectrum::partial_fraction_form(int l) const {
  const double x = static_cast<double>(l) * (l + 1);
  Complex sum = 0.0;
  for (std::size_t i = 0; i < lambdas_.size(); ++i) {
    sum += residues_[i] / (x - lambdas_[i] * (lambdas_[i] + 1.0));
  }
  return sum;
}

double angular_power(const PowerSpectrum& spec, int l) {
  const Complex product = spec.product_form(l);
  const Complex partial = spec.partial_fraction_form(l);
  const double x = static_cast<double>(l) * (l + 1);
  double floor = 0.0;
  for (std::size_t i = 0; i < spec.lambdas().size(); ++i) {
    floor += std::abs(spec.residues()[i] / (x + spec.kappas()[i]));
  }
  if (std::abs(product - partial) > 1e-10 * std::abs(product) + 1e-14 * floor) {
    throw_numeric("spectrum.inconsistent",
                  "product and partial-fraction forms of C_l disagree at l = " +
                      std::to_string(l));
  }
  return product.real();
}

}  // namespace sgrf
