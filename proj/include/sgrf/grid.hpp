#pragma once

#include <string_view>
#include <vector>

namespace sgrf {

/// Latitude convention written into bank and field headers.
inline constexpr std::string_view kGridConvention = "sin(pi*j/(2n+1))";

/// Iso-latitude grid: z_j = sin(pi j / (2n+1)) for j = -n..n and
/// phi_k = 2 pi k / n_phi for k = 0..n_phi-1. Strictly increasing in z,
/// z_0 = 0, z_{-j} = -z_j exactly, poles excluded.
struct LatitudeGrid {
  int n = 0;
  int m_max = 0;
  int n_phi = 0;
  std::vector<double> z;    // 2n+1 values, z[j + n] = z_j
  std::vector<double> phi;  // n_phi values

  int rows() const noexcept { return 2 * n + 1; }
  double z_at(int j) const { return z[static_cast<std::size_t>(j + n)]; }

  friend bool operator==(const LatitudeGrid&, const LatitudeGrid&) = default;
};

/// Requires n >= 1, m_max >= 1, n_phi >= 2 m_max; throws Error("grid.invalid").
LatitudeGrid build_grid(int n, int m_max, int n_phi);

}  // namespace sgrf
