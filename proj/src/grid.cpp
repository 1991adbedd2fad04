#include "sgrf/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sgrf/error.hpp"

namespace sgrf {

LatitudeGrid build_grid(int n, int m_max, int n_phi) {
  if (n < 1 || m_max < 1 || n_phi < 2 * m_max) {
    throw_usage("grid.invalid", "grid needs n >= 1, m_max >= 1 and n_phi >= 2*m_max (got n=" +
                                    std::to_string(n) + ", m_max=" + std::to_string(m_max) +
                                    ", n_phi=" + std::to_string(n_phi) + ")");
  }
  LatitudeGrid grid;
  grid.n = n;
  grid.m_max = m_max;
  grid.n_phi = n_phi;
  grid.z.assign(static_cast<std::size_t>(2 * n + 1), 0.0);
  for (int j = 1; j <= n; ++j) {
    const double value = std::sin(std::numbers::pi * j / (2.0 * n + 1.0));
    grid.z[static_cast<std::size_t>(n + j)] = value;
    grid.z[static_cast<std::size_t>(n - j)] = -value;
  }
  grid.phi.resize(static_cast<std::size_t>(n_phi));
  for (int k = 0; k < n_phi; ++k) {
    grid.phi[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi * k / n_phi;
  }
  return grid;
}

}  // namespace sgrf
