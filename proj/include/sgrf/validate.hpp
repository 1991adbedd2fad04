#pragma once

// Covariance validation: analytic C_T, a direct spherical-harmonic oracle
// sampler, streaming empirical covariance on grid point pairs, the max-error
// metric and the multi-resolution convergence study.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sgrf/filterbank.hpp"
#include "sgrf/rng.hpp"
#include "sgrf/sampler.hpp"

namespace sgrf {

inline constexpr double kDefaultTailTolerance = 1e-10;

/// Rigorous bound on sum_{l > l_max} (2l+1)/(4 pi) C_l, from
/// |kappa_i + l(l+1)| >= l(l+1) - max|kappa| and an integral comparison.
/// Infinite when the bound does not apply (M = 1 or l_max too small).
double covariance_tail_bound(const PowerSpectrum& spec, int l_max);

/// Smallest l_max whose tail bound is below `tol`.
int required_l_max(const PowerSpectrum& spec, double tol = kDefaultTailTolerance);

/// sum_{l <= l_max} (2l+1)/(4 pi) C_l P_l(cos_gamma).
double truncated_covariance(const PowerSpectrum& spec, double cos_gamma, int l_max);

struct AnalyticValue {
  double value;
  double tail_bound;
};

/// C_T(cos_gamma) truncated at l_max together with its tail bound.
/// Throws Error("validate.tail_bound") if the bound is not below `tol`.
AnalyticValue analytic_covariance(const PowerSpectrum& spec, double cos_gamma, int l_max,
                                  double tol = kDefaultTailTolerance);

struct SpherePoint {
  double z;
  double phi;
};

double cos_angle(const SpherePoint& a, const SpherePoint& b);

/// Direct synthesis T = sum_{l <= l_max} sum_m a_lm Y_lm at fixed points, with
/// a_l0 ~ N(0, C_l) and Re a_lm, Im a_lm ~ N(0, C_l/2) for m > 0. Tables are
/// built once; sample() costs O(l_max^2 |points|).
class DirectOracle {
 public:
  static constexpr int kMaxDegree = 64;

  DirectOracle(const PowerSpectrum& spec, int l_max, std::vector<SpherePoint> points);

  /// Draws a_lm for l ascending, m = 0..l ascending (real part first).
  std::vector<double> sample(Rng& rng) const;

  int l_max() const noexcept { return l_max_; }
  const std::vector<SpherePoint>& points() const noexcept { return points_; }

 private:
  int l_max_;
  std::vector<SpherePoint> points_;
  std::vector<double> sqrt_power_;  // sqrt(C_l)
  std::vector<double> legendre_;    // [point][l][m] L_lm(z)
  std::vector<Complex> phase_;      // [point][m] e^{i m phi}
};

std::vector<double> oracle_sample_direct(const PowerSpectrum& spec, int l_max,
                                         std::vector<SpherePoint> points, Rng& rng);

/// Streaming mean and variance of a vector of product terms (Welford), with
/// an associative merge for combining independent blocks.
class MomentAccumulator {
 public:
  explicit MomentAccumulator(std::size_t size = 0) : mean_(size, 0.0), m2_(size, 0.0) {}

  void add(std::span<const double> terms);
  void merge(const MomentAccumulator& other);

  std::uint64_t count() const noexcept { return count_; }
  std::size_t size() const noexcept { return mean_.size(); }
  double mean(std::size_t i) const { return mean_[i]; }
  /// Standard error of the mean; 0 for fewer than two terms.
  double standard_error(std::size_t i) const;

 private:
  std::uint64_t count_ = 0;
  std::vector<double> mean_;
  std::vector<double> m2_;
};

/// Pair of grid points (latitude index j in -n..n, longitude index k).
struct GridPair {
  int j1, k1, j2, k2;
};

/// Equator set: (0, 0) against (0, k) for every lag k = 0..n_phi/2.
std::vector<GridPair> equator_pairs(const LatitudeGrid& grid);
/// Meridian set: (0, 0) against (j, 0) for every latitude j = -n..n.
std::vector<GridPair> meridian_pairs(const LatitudeGrid& grid);

/// Empirical covariance N^{-1} sum T(x) T(y) over a stream of samples.
/// With `rotate` each sample contributes the average of its products over
/// all n_phi rigid longitude shifts of the pair, which has the same mean by
/// longitudinal stationarity and a smaller variance.
class CovarianceEstimator {
 public:
  CovarianceEstimator(const LatitudeGrid& grid, std::vector<GridPair> pairs, bool rotate);

  /// Throws Error("validate.grid_mismatch") for a sample on another grid.
  void add(const FieldSample& field);
  void merge(const CovarianceEstimator& other);

  const LatitudeGrid& grid() const noexcept { return grid_; }
  const std::vector<GridPair>& pairs() const noexcept { return pairs_; }
  bool rotate() const noexcept { return rotate_; }
  const MomentAccumulator& moments() const noexcept { return moments_; }

 private:
  LatitudeGrid grid_;
  std::vector<GridPair> pairs_;
  bool rotate_;
  MomentAccumulator moments_;
  std::vector<double> terms_;
};

struct CovarianceCurve {
  std::string name;
  std::vector<double> gamma;  // separation angle, signed by orientation
  std::vector<double> cos_gamma;
  std::vector<double> analytic;
  std::vector<double> empirical;
  std::vector<double> standard_error;
  std::uint64_t samples = 0;
};

/// Joins estimator output with analytic C_T at `l_max`.
CovarianceCurve make_curve(const std::string& name, const CovarianceEstimator& estimator,
                           const PowerSpectrum& spec, int l_max);

/// max_k |empirical_k - analytic_k|.
double max_error(const CovarianceCurve& curve);

/// Draws samples 0..count-1 of `seed` from the bank into copies of
/// `prototype`. Samples are processed in fixed blocks merged in block order,
/// so the result does not depend on `threads`.
CovarianceEstimator estimate_covariance(const FilterBank& bank, const CovarianceEstimator& prototype,
                                        std::uint64_t count, std::uint64_t seed, int threads = 1);

struct ResolutionResult {
  int n;
  CovarianceCurve equator;
  CovarianceCurve meridian;
  double equator_error;
  double meridian_error;
};

struct ConvergenceReport {
  std::vector<ResolutionResult> results;
  double equator_slope;
  double meridian_slope;
  std::uint64_t samples;
  std::uint64_t seed;
};

struct StudyOptions {
  std::uint64_t samples = 40'000;
  std::uint64_t seed = 1;
  int threads = 1;
  bool rotate = true;
};

/// For each n: bank with m_max = n, n_phi = 2n; equator and meridian curves
/// and errors; least-squares slope of log e against log n for both sets.
/// Resolutions must be strictly ascending and at least two.
ConvergenceReport convergence_study(const PowerSpectrum& spec, const std::vector<int>& resolutions,
                                    const StudyOptions& options);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace sgrf
