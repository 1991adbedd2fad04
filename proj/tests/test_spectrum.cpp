#include <cmath>
#include <random>

#include "doctest.h"
#include "sgrf/error.hpp"
#include "sgrf/spectrum.hpp"
#include "test_support.hpp"

using sgrf::Complex;
using sgrf::PowerSpectrum;
using sgrf::testing::rel_err;

namespace {

std::string error_code(auto&& fn) {
  try {
    fn();
  } catch (const sgrf::Error& e) {
    return e.code();
  }
  return "";
}

Complex direct_product(std::span<const Complex> kappas, double x) {
  Complex c = 1.0;
  for (const Complex k : kappas) c /= x + k;
  return c;
}

}  // namespace

TEST_CASE("lambda_from_kappa") {
  CHECK(error_code([] { sgrf::lambda_from_kappa(0.0); }) == "spectrum.integer_lambda");

  const Complex lam = sgrf::lambda_from_kappa(2.0);
  CHECK(std::abs(lam - Complex(-0.5, std::sqrt(7.0) / 2.0)) < 1e-15);
  CHECK(std::abs(lam * (lam + 1.0) + 2.0) < 1e-14);

  for (double a : {0.1, 1.0, std::sqrt(10.0), 250.0}) {
    for (double sign : {1.0, -1.0}) {
      const Complex kappa(0.0, sign * a);
      const Complex l = sgrf::lambda_from_kappa(kappa);
      CHECK(l.real() >= -0.5);
      CHECK(std::abs(l * (l + 1.0) + kappa) <= 1e-12 * std::max(1.0, a));
    }
  }
  // kappa = -l(l+1) for integer l is rejected.
  CHECK(error_code([] { sgrf::lambda_from_kappa(-6.0); }) == "spectrum.integer_lambda");
}

TEST_CASE("residues") {
  const Complex single[] = {Complex(3.0, 0.5)};
  CHECK(sgrf::residues(single)[0] == Complex(1.0));

  const double a = std::sqrt(10.0);
  const Complex pair[] = {Complex(0, a), Complex(0, -a)};
  const auto b = sgrf::residues(pair);
  CHECK(std::abs(b[0] - Complex(0, 1.0 / (2 * a))) < 1e-16);
  CHECK(std::abs(b[1] - Complex(0, -1.0 / (2 * a))) < 1e-16);
  for (double x : {0.0, 2.0, 6.0, 12.0}) {
    const Complex pf = b[0] / (x + pair[0]) + b[1] / (x + pair[1]);
    CHECK(rel_err(pf, 1.0 / ((x + Complex(0, a)) * (x - Complex(0, a)))) < 1e-14);
  }

  const Complex triple[] = {Complex(1, 0), Complex(2, 1), Complex(2, -1)};
  const auto b3 = sgrf::residues(triple);
  CHECK(std::abs(b3[0] + b3[1] + b3[2]) < 1e-15);
  for (double x : {0.0, 0.5, 3.0, 20.0, 110.0}) {
    Complex pf = 0.0;
    for (int i = 0; i < 3; ++i) pf += b3[i] / (x + triple[i]);
    CHECK(rel_err(pf, direct_product(triple, x)) < 1e-12);
  }

  const Complex dup[] = {Complex(1, 1), Complex(1, 1)};
  CHECK(error_code([&] { sgrf::residues(dup); }) == "spectrum.duplicate_kappa");
}

TEST_CASE("angular_power of the reference spectrum") {
  const auto spec = PowerSpectrum::from_squared_amplitude(10.0);
  CHECK(spec.order() == 2);
  CHECK(std::abs(sgrf::angular_power(spec, 0) - 0.1) < 1e-15);
  CHECK(std::abs(sgrf::angular_power(spec, 1) - 1.0 / 14.0) < 1e-15);
  for (int l = 0; l <= 200; ++l) {
    const double x = double(l) * (l + 1);
    CHECK(rel_err(sgrf::angular_power(spec, l), 1.0 / (10.0 + x * x)) < 1e-13);
  }
}

TEST_CASE("single real kappa") {
  const auto spec = PowerSpectrum::from_kappas({Complex(2.0, 0.0)});
  CHECK(std::abs(sgrf::angular_power(spec, 0) - 0.5) < 1e-15);
}

TEST_CASE("amplitude scales C_l and residues") {
  const auto base = PowerSpectrum::from_squared_amplitude(10.0);
  const auto scaled = PowerSpectrum::from_squared_amplitude(10.0, 3.0);
  for (int l : {0, 3, 17}) {
    CHECK(rel_err(sgrf::angular_power(scaled, l), 3.0 * sgrf::angular_power(base, l)) < 1e-15);
  }
  CHECK(std::abs(scaled.residues()[0] - 3.0 * base.residues()[0]) < 1e-16);
}

TEST_CASE("construction rejects invalid spectra") {
  CHECK(error_code([] { PowerSpectrum::from_kappas({Complex(0.0, 1.0)}); }) ==
        "spectrum.not_conjugate");
  CHECK(error_code([] { PowerSpectrum::from_kappas({Complex(-2.0, 0.0)}); }) ==
        "spectrum.integer_lambda");
  CHECK(error_code([] {
          PowerSpectrum::from_kappas({Complex(1.0, 2.0), Complex(1.0, -2.0), Complex(1.0, 2.0)});
        }) == "spectrum.duplicate_kappa");
  // kappa = -3.5 is a valid non-integer degree but C_1 = 1/(2 - 3.5) < 0.
  CHECK(error_code([] { PowerSpectrum::from_kappas({Complex(-3.5, 0.0)}); }) ==
        "spectrum.not_positive");
  CHECK(error_code([] { PowerSpectrum::from_kappas({}); }) == "spectrum.empty");
}

TEST_CASE("reference spectrum forms agree to 1e-10 for l <= 200") {
  const auto spec = PowerSpectrum::from_squared_amplitude(10.0);
  for (int l = 0; l <= 200; ++l) {
    CHECK(rel_err(spec.partial_fraction_form(l), spec.product_form(l)) <= 1e-10);
  }
}

TEST_CASE("product and partial fraction forms agree on random conjugate spectra") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.2, 30.0);
  int built = 0;
  for (int trial = 0; trial < 200 && built < 60; ++trial) {
    std::vector<Complex> kappas;
    const int pairs = 1 + trial % 2;
    for (int p = 0; p < pairs; ++p) {
      const Complex k(u(rng), u(rng));
      kappas.push_back(k);
      kappas.push_back(std::conj(k));
    }
    if (trial % 3 == 0) kappas.push_back(Complex(u(rng), 0.0));
    PowerSpectrum spec = PowerSpectrum::from_kappas(kappas);
    ++built;
    for (int l = 0; l <= 200; ++l) {
      const Complex prod = spec.product_form(l);
      // Tolerance: 1e-10 relative plus the rounding floor of the
      // partial-fraction sum, which cancels heavily for M > 2 at large l.
      double floor = 0.0;
      for (int i = 0; i < spec.order(); ++i) {
        floor += std::abs(spec.residues()[i] / (double(l) * (l + 1) + spec.kappas()[i]));
      }
      CHECK(std::abs(spec.partial_fraction_form(l) - prod) <=
            1e-10 * std::abs(prod) + 1e-14 * floor);
      CHECK_NOTHROW(sgrf::angular_power(spec, l));
      CHECK(std::abs(prod.imag()) <= 1e-12 * prod.real());
    }
  }
  CHECK(built == 60);
}

TEST_CASE("C_l decays like l^{-2M}") {
  for (const auto& spec : {PowerSpectrum::from_squared_amplitude(10.0),
                           PowerSpectrum::from_kappas({Complex(1, 2), Complex(1, -2),
                                                       Complex(5, 0)})}) {
    const double ratio = sgrf::angular_power(spec, 256) / sgrf::angular_power(spec, 128);
    const double expected = std::pow(2.0, -2.0 * spec.order());
    CHECK(std::abs(ratio / expected - 1.0) < 0.2);
  }
}
