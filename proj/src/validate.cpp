#include "sgrf/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sgrf/error.hpp"
#include "sgrf/parallel.hpp"

namespace sgrf {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kBlockSize = 256;

double max_abs_kappa(const PowerSpectrum& spec) {
  double k = 0.0;
  for (const Complex& kappa : spec.kappas()) k = std::max(k, std::abs(kappa));
  return k;
}

}  // namespace

double covariance_tail_bound(const PowerSpectrum& spec, int l_max) {
  const int order = spec.order();
  const double u = static_cast<double>(l_max) * (l_max + 1.0);
  const double kmax = max_abs_kappa(spec);
  if (order < 2 || l_max < 0 || u <= kmax) return std::numeric_limits<double>::infinity();
  return spec.amplitude() / (4.0 * kPi) * std::pow(u - kmax, 1.0 - order) / (order - 1.0);
}

int required_l_max(const PowerSpectrum& spec, double tol) {
  const int order = spec.order();
  if (order < 2) {
    throw_usage("validate.tail_bound", "C_T(1) diverges for a single-root spectrum");
  }
  const double target =
      max_abs_kappa(spec) + std::pow(spec.amplitude() / (4.0 * kPi * (order - 1.0) * tol),
                                     1.0 / (order - 1.0));
  int l = static_cast<int>(std::ceil(0.5 * (std::sqrt(1.0 + 4.0 * target) - 1.0)));
  l = std::max(l - 2, 0);
  while (!(covariance_tail_bound(spec, l) < tol)) ++l;
  return l;
}

double truncated_covariance(const PowerSpectrum& spec, double cos_gamma, int l_max) {
  if (!(cos_gamma >= -1.0 && cos_gamma <= 1.0)) {
    throw_usage("validate.domain", "cos_gamma must lie in [-1, 1]");
  }
  // Forward Legendre recurrence; terms are summed from the largest l down.
  std::vector<double> terms(static_cast<std::size_t>(l_max + 1));
  double prev = 1.0, curr = cos_gamma;
  for (int l = 0; l <= l_max; ++l) {
    double p;
    if (l == 0) {
      p = 1.0;
    } else if (l == 1) {
      p = cos_gamma;
    } else {
      const double next = ((2.0 * l - 1.0) * cos_gamma * curr - (l - 1.0) * prev) / l;
      prev = curr;
      curr = next;
      p = next;
    }
    terms[static_cast<std::size_t>(l)] = (2.0 * l + 1.0) * angular_power(spec, l) * p;
  }
  double sum = 0.0;
  for (int l = l_max; l >= 0; --l) sum += terms[static_cast<std::size_t>(l)];
  return sum / (4.0 * kPi);
}

AnalyticValue analytic_covariance(const PowerSpectrum& spec, double cos_gamma, int l_max,
                                  double tol) {
  const double bound = covariance_tail_bound(spec, l_max);
  if (!(bound < tol)) {
    throw_usage("validate.tail_bound",
                "l_max = " + std::to_string(l_max) + " leaves a tail bound of " +
                    std::to_string(bound) + "; need l_max >= " +
                    std::to_string(required_l_max(spec, tol)));
  }
  return {truncated_covariance(spec, cos_gamma, l_max), bound};
}

double cos_angle(const SpherePoint& a, const SpherePoint& b) {
  const double sa = std::sqrt(std::max(0.0, (1.0 - a.z) * (1.0 + a.z)));
  const double sb = std::sqrt(std::max(0.0, (1.0 - b.z) * (1.0 + b.z)));
  return std::clamp(a.z * b.z + sa * sb * std::cos(a.phi - b.phi), -1.0, 1.0);
}

DirectOracle::DirectOracle(const PowerSpectrum& spec, int l_max, std::vector<SpherePoint> points)
    : l_max_(l_max), points_(std::move(points)) {
  if (l_max < 0 || l_max > kMaxDegree) {
    throw_usage("validate.oracle", "direct oracle supports 0 <= l_max <= 64");
  }
  const auto degrees = static_cast<std::size_t>(l_max + 1);
  sqrt_power_.resize(degrees);
  for (int l = 0; l <= l_max; ++l) {
    sqrt_power_[static_cast<std::size_t>(l)] = std::sqrt(angular_power(spec, l));
  }
  legendre_.assign(points_.size() * degrees * degrees, 0.0);
  phase_.resize(points_.size() * degrees);
  for (std::size_t p = 0; p < points_.size(); ++p) {
    for (int m = 0; m <= l_max; ++m) {
      const auto row = normalized_assoc_legendre_row(m, l_max, points_[p].z);
      for (int l = m; l <= l_max; ++l) {
        legendre_[(p * degrees + static_cast<std::size_t>(l)) * degrees +
                  static_cast<std::size_t>(m)] = row[static_cast<std::size_t>(l - m)];
      }
      phase_[p * degrees + static_cast<std::size_t>(m)] = std::polar(1.0, m * points_[p].phi);
    }
  }
}

std::vector<double> DirectOracle::sample(Rng& rng) const {
  const auto degrees = static_cast<std::size_t>(l_max_ + 1);
  std::vector<Complex> a(degrees * degrees);
  for (std::size_t l = 0; l < degrees; ++l) {
    for (std::size_t m = 0; m <= l; ++m) {
      a[l * degrees + m] =
          sqrt_power_[l] * draw_complex_std_normal(rng, static_cast<int>(m));
    }
  }
  // a_{l,-m} Y_{l,-m} = conj(a_lm Y_lm), so the m < 0 half doubles Re.
  std::vector<double> out(points_.size(), 0.0);
  for (std::size_t p = 0; p < points_.size(); ++p) {
    double total = 0.0;
    for (std::size_t m = 0; m < degrees; ++m) {
      double radial_re = 0.0, radial_im = 0.0;
      for (std::size_t l = m; l < degrees; ++l) {
        const double L = legendre_[(p * degrees + l) * degrees + m];
        radial_re += a[l * degrees + m].real() * L;
        radial_im += a[l * degrees + m].imag() * L;
      }
      const Complex term = Complex(radial_re, radial_im) * phase_[p * degrees + m];
      total += (m == 0 ? 1.0 : 2.0) * term.real();
    }
    out[p] = total;
  }
  return out;
}

std::vector<double> oracle_sample_direct(const PowerSpectrum& spec, int l_max,
                                         std::vector<SpherePoint> points, Rng& rng) {
  return DirectOracle(spec, l_max, std::move(points)).sample(rng);
}

void MomentAccumulator::add(std::span<const double> terms) {
  if (terms.size() != mean_.size()) {
    throw_usage("validate.shape", "accumulator term count mismatch");
  }
  ++count_;
  const double n = static_cast<double>(count_);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double delta = terms[i] - mean_[i];
    mean_[i] += delta / n;
    m2_[i] += delta * (terms[i] - mean_[i]);
  }
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  if (other.size() != size()) throw_usage("validate.shape", "accumulator size mismatch");
  if (other.count_ == 0) return;
  if (count_ == 0) {
    *this = other;
    return;
  }
  const double na = static_cast<double>(count_);
  const double nb = static_cast<double>(other.count_);
  const double n = na + nb;
  for (std::size_t i = 0; i < mean_.size(); ++i) {
    const double delta = other.mean_[i] - mean_[i];
    mean_[i] += delta * nb / n;
    m2_[i] += other.m2_[i] + delta * delta * na * nb / n;
  }
  count_ += other.count_;
}

double MomentAccumulator::standard_error(std::size_t i) const {
  if (count_ < 2) return 0.0;
  const double n = static_cast<double>(count_);
  return std::sqrt(std::max(m2_[i], 0.0) / (n - 1.0) / n);
}

std::vector<GridPair> equator_pairs(const LatitudeGrid& grid) {
  std::vector<GridPair> pairs;
  for (int k = 0; k <= grid.n_phi / 2; ++k) pairs.push_back({0, 0, 0, k});
  return pairs;
}

std::vector<GridPair> meridian_pairs(const LatitudeGrid& grid) {
  std::vector<GridPair> pairs;
  for (int j = -grid.n; j <= grid.n; ++j) pairs.push_back({0, 0, j, 0});
  return pairs;
}

CovarianceEstimator::CovarianceEstimator(const LatitudeGrid& grid, std::vector<GridPair> pairs,
                                         bool rotate)
    : grid_(grid), pairs_(std::move(pairs)), rotate_(rotate), moments_(pairs_.size()),
      terms_(pairs_.size()) {
  for (const GridPair& p : pairs_) {
    if (std::abs(p.j1) > grid.n || std::abs(p.j2) > grid.n || p.k1 < 0 || p.k2 < 0 ||
        p.k1 >= grid.n_phi || p.k2 >= grid.n_phi) {
      throw_usage("validate.pairs", "pair lies outside the grid");
    }
  }
}

void CovarianceEstimator::add(const FieldSample& field) {
  if (!(field.grid == grid_)) {
    throw_usage("validate.grid_mismatch", "sample grid differs from the estimator grid");
  }
  const int n_phi = grid_.n_phi;
  for (std::size_t i = 0; i < pairs_.size(); ++i) {
    const GridPair& p = pairs_[i];
    const auto r1 = field.ring(p.j1);
    const auto r2 = field.ring(p.j2);
    if (!rotate_) {
      terms_[i] = r1[static_cast<std::size_t>(p.k1)] * r2[static_cast<std::size_t>(p.k2)];
      continue;
    }
    double sum = 0.0;
    for (int s = 0; s < n_phi; ++s) {
      sum += r1[static_cast<std::size_t>((p.k1 + s) % n_phi)] *
             r2[static_cast<std::size_t>((p.k2 + s) % n_phi)];
    }
    terms_[i] = sum / n_phi;
  }
  moments_.add(terms_);
}

void CovarianceEstimator::merge(const CovarianceEstimator& other) {
  if (!(other.grid_ == grid_) || other.pairs_.size() != pairs_.size()) {
    throw_usage("validate.grid_mismatch", "cannot merge estimators over different pair sets");
  }
  moments_.merge(other.moments_);
}

CovarianceCurve make_curve(const std::string& name, const CovarianceEstimator& estimator,
                           const PowerSpectrum& spec, int l_max) {
  const LatitudeGrid& grid = estimator.grid();
  CovarianceCurve curve;
  curve.name = name;
  curve.samples = estimator.moments().count();
  for (std::size_t i = 0; i < estimator.pairs().size(); ++i) {
    const GridPair& p = estimator.pairs()[i];
    const SpherePoint a{grid.z_at(p.j1), grid.phi[static_cast<std::size_t>(p.k1)]};
    const SpherePoint b{grid.z_at(p.j2), grid.phi[static_cast<std::size_t>(p.k2)]};
    const double c = cos_angle(a, b);
    double gamma = std::acos(c);
    if (b.z < a.z || (b.z == a.z && b.phi < a.phi)) gamma = -gamma;
    curve.gamma.push_back(gamma);
    curve.cos_gamma.push_back(c);
    curve.analytic.push_back(analytic_covariance(spec, c, l_max).value);
    curve.empirical.push_back(estimator.moments().mean(i));
    curve.standard_error.push_back(estimator.moments().standard_error(i));
  }
  return curve;
}

double max_error(const CovarianceCurve& curve) {
  double worst = 0.0;
  for (std::size_t i = 0; i < curve.analytic.size(); ++i) {
    worst = std::max(worst, std::abs(curve.empirical[i] - curve.analytic[i]));
  }
  return worst;
}

CovarianceEstimator estimate_covariance(const FilterBank& bank,
                                        const CovarianceEstimator& prototype, std::uint64_t count,
                                        std::uint64_t seed, int threads) {
  const std::uint64_t blocks = (count + kBlockSize - 1) / kBlockSize;
  std::vector<CovarianceEstimator> partial(static_cast<std::size_t>(blocks), prototype);
  parallel_for(static_cast<std::size_t>(blocks), threads, [&](std::size_t b) {
    Sampler sampler(bank);
    const std::uint64_t first = b * kBlockSize;
    const std::uint64_t last = std::min(count, first + kBlockSize);
    for (std::uint64_t s = first; s < last; ++s) partial[b].add(sampler.generate(seed, s));
  });
  CovarianceEstimator total = prototype;
  for (const auto& part : partial) total.merge(part);
  return total;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw_usage("validate.fit", "slope fit needs at least two points");
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ConvergenceReport convergence_study(const PowerSpectrum& spec, const std::vector<int>& resolutions,
                                    const StudyOptions& options) {
  if (resolutions.size() < 2) {
    throw_usage("validate.resolutions", "need at least two resolutions");
  }
  for (std::size_t i = 0; i < resolutions.size(); ++i) {
    if (resolutions[i] < 1) throw_usage("validate.resolutions", "resolutions must be positive");
    if (i > 0 && resolutions[i] <= resolutions[i - 1]) {
      throw_usage("validate.resolutions", "resolutions must be strictly ascending (no duplicates)");
    }
  }
  if (options.samples < 2) throw_usage("validate.samples", "need at least two samples");

  const int l_max = required_l_max(spec);
  ConvergenceReport report;
  report.samples = options.samples;
  report.seed = options.seed;
  std::vector<double> ns, eq_errors, mer_errors;
  for (int n : resolutions) {
    const LatitudeGrid grid = build_grid(n, n, 2 * n);
    const FilterBank bank = precompute(spec, grid, options.threads);
    // One pass over the samples feeds both sets.
    std::vector<GridPair> joint = equator_pairs(grid);
    const std::size_t n_eq = joint.size();
    const auto mer = meridian_pairs(grid);
    joint.insert(joint.end(), mer.begin(), mer.end());
    const CovarianceEstimator all = estimate_covariance(
        bank, CovarianceEstimator(grid, joint, options.rotate), options.samples, options.seed,
        options.threads);

    ResolutionResult result{n, {}, {}, 0.0, 0.0};
    result.equator = make_curve("equator", all, spec, l_max);
    result.meridian = result.equator;
    auto split = [](CovarianceCurve& c, std::size_t from, std::size_t to, const char* name) {
      auto cut = [&](std::vector<double>& v) {
        v = std::vector<double>(v.begin() + static_cast<std::ptrdiff_t>(from),
                                v.begin() + static_cast<std::ptrdiff_t>(to));
      };
      c.name = name;
      cut(c.gamma);
      cut(c.cos_gamma);
      cut(c.analytic);
      cut(c.empirical);
      cut(c.standard_error);
    };
    split(result.equator, 0, n_eq, "equator");
    split(result.meridian, n_eq, joint.size(), "meridian");
    result.equator_error = max_error(result.equator);
    result.meridian_error = max_error(result.meridian);
    ns.push_back(n);
    eq_errors.push_back(result.equator_error);
    mer_errors.push_back(result.meridian_error);
    report.results.push_back(std::move(result));
  }
  report.equator_slope = loglog_slope(ns, eq_errors);
  report.meridian_slope = loglog_slope(ns, mer_errors);
  return report;
}

}  // namespace sgrf
