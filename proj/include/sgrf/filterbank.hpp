#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sgrf/grid.hpp"
#include "sgrf/spectrum.hpp"

namespace sgrf {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatrixView = Eigen::Map<const RowMatrix>;

/// Per-mode state-space filters for one grid and spectrum.
///
/// Steps are indexed s = 0..2n-1: s < n is the north step z_{s} -> z_{s+1},
/// s >= n the south step z_{-(s-n)} -> z_{-(s-n+1)}. For every mode
/// m = 0..m_max a step holds the transition A (M x M) and the lower-triangular
/// innovation factor B; B_eq factors the equator covariance J^m(0, 0).
///
/// Storage is row-major, laid out step-major then mode so that a latitude
/// sweep reads memory sequentially.
class FilterBank {
 public:
  FilterBank(LatitudeGrid grid, PowerSpectrum spectrum, std::vector<double> equator,
             std::vector<double> steps);

  const LatitudeGrid& grid() const noexcept { return grid_; }
  const PowerSpectrum& spectrum() const noexcept { return spectrum_; }
  int order() const noexcept { return spectrum_.order(); }
  int n() const noexcept { return grid_.n; }
  int m_max() const noexcept { return grid_.m_max; }
  int step_count() const noexcept { return 2 * grid_.n; }

  /// Latitude index j (in -n..n) reached by step s, and the one it leaves.
  int step_target(int s) const noexcept { return s < n() ? s + 1 : -(s - n() + 1); }
  int step_source(int s) const noexcept { return s < n() ? s : -(s - n()); }

  ConstMatrixView equator_factor(int m) const;
  ConstMatrixView transition(int m, int s) const;
  ConstMatrixView innovation(int m, int s) const;

  std::span<const double> equator_data() const noexcept { return equator_; }
  std::span<const double> step_data() const noexcept { return steps_; }

  std::size_t step_offset(int m, int s) const noexcept {
    const auto mm = static_cast<std::size_t>(order()) * static_cast<std::size_t>(order());
    return ((static_cast<std::size_t>(s) * static_cast<std::size_t>(m_max() + 1) +
             static_cast<std::size_t>(m)) *
            2) *
           mm;
  }

  friend bool operator==(const FilterBank&, const FilterBank&) = default;

 private:
  LatitudeGrid grid_;
  PowerSpectrum spectrum_;
  std::vector<double> equator_;  // (m_max+1) blocks of M*M
  std::vector<double> steps_;    // [s][m][A, B] blocks of M*M
};

/// Builds every filter of the bank. Work is split over modes on up to
/// `threads` workers; any failure aborts the whole build.
FilterBank precompute(const PowerSpectrum& spec, const LatitudeGrid& grid, int threads = 1);

}  // namespace sgrf
