#include "sgrf/filterbank.hpp"

#include <algorithm>
#include <string>

#include "sgrf/covariance.hpp"
#include "sgrf/error.hpp"
#include "sgrf/parallel.hpp"

namespace sgrf {
namespace {

void store(const Matrix& m, double* out) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) *out++ = m(r, c);
  }
}

}  // namespace

FilterBank::FilterBank(LatitudeGrid grid, PowerSpectrum spectrum, std::vector<double> equator,
                       std::vector<double> steps)
    : grid_(std::move(grid)),
      spectrum_(std::move(spectrum)),
      equator_(std::move(equator)),
      steps_(std::move(steps)) {
  const auto mm = static_cast<std::size_t>(order()) * static_cast<std::size_t>(order());
  const auto modes = static_cast<std::size_t>(m_max() + 1);
  if (equator_.size() != modes * mm ||
      steps_.size() != static_cast<std::size_t>(step_count()) * modes * 2 * mm) {
    throw_usage("bank.shape", "filter bank arrays do not match the grid and spectrum");
  }
}

ConstMatrixView FilterBank::equator_factor(int m) const {
  const auto mm = static_cast<std::size_t>(order()) * static_cast<std::size_t>(order());
  return ConstMatrixView(equator_.data() + static_cast<std::size_t>(m) * mm, order(), order());
}

ConstMatrixView FilterBank::transition(int m, int s) const {
  return ConstMatrixView(steps_.data() + step_offset(m, s), order(), order());
}

ConstMatrixView FilterBank::innovation(int m, int s) const {
  const auto mm = static_cast<std::size_t>(order()) * static_cast<std::size_t>(order());
  return ConstMatrixView(steps_.data() + step_offset(m, s) + mm, order(), order());
}

FilterBank precompute(const PowerSpectrum& spec, const LatitudeGrid& grid, int threads) {
  if (grid.rows() != static_cast<int>(grid.z.size()) || grid.n < 1) {
    throw_usage("grid.invalid", "grid is inconsistent");
  }
  const int order = spec.order();
  const int n = grid.n;
  const auto mm = static_cast<std::size_t>(order) * static_cast<std::size_t>(order);
  const auto modes = static_cast<std::size_t>(grid.m_max + 1);
  const LegendreTable table(spec, grid, grid.m_max + order - 1, threads);

  std::vector<double> equator(modes * mm);
  std::vector<double> steps(static_cast<std::size_t>(2 * n) * modes * 2 * mm);

  parallel_for(modes, threads, [&](std::size_t mode) {
    const int m = static_cast<int>(mode);
    std::vector<Matrix> diagonal(static_cast<std::size_t>(grid.rows()));
    for (int row = 0; row < grid.rows(); ++row) {
      diagonal[static_cast<std::size_t>(row)] = table.jmatrix(m, row, row);
    }
    const Matrix& j00 = diagonal[static_cast<std::size_t>(n)];
    store(psd_factor(j00, j00.trace()), equator.data() + mode * mm);

    for (int s = 0; s < 2 * n; ++s) {
      const int source = (s < n ? s : -(s - n)) + n;
      const int target = (s < n ? s + 1 : -(s - n + 1)) + n;
      const TransitionStep step =
          transition_step(diagonal[static_cast<std::size_t>(source)],
                          table.jmatrix(m, source, target),
                          diagonal[static_cast<std::size_t>(target)]);
      double* out = steps.data() + ((static_cast<std::size_t>(s) * modes + mode) * 2) * mm;
      store(step.A, out);
      store(step.B, out + mm);
    }
  });

  return FilterBank(grid, spec, std::move(equator), std::move(steps));
}

}  // namespace sgrf
