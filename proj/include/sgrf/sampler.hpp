#pragma once

// Field generation: equator initialization, latitude marching of every mode
// state, and ring synthesis by a Hermitian inverse real FFT.
//
// Noise order within one sample: equator, then north latitudes 1..n, then
// south latitudes -1..-n; at each latitude modes m ascending and within a
// mode components q ascending. A complex draw consumes two normals (real part
// first). Sample k of seed s uses Rng(s, k).

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sgrf/covariance.hpp"
#include "sgrf/filterbank.hpp"
#include "sgrf/rng.hpp"

namespace sgrf {

/// (Transformed) derivative components g_m^{(0..M-1)} at one latitude.
using ModeState = Eigen::VectorXcd;

struct FieldSample {
  LatitudeGrid grid;
  std::uint64_t seed = 0;
  std::uint64_t sample = 0;
  std::vector<double> data;  // (2n+1) x n_phi row-major, row i+n <-> z_i

  double at(int j, int k) const {
    return data[static_cast<std::size_t>(j + grid.n) * static_cast<std::size_t>(grid.n_phi) +
                static_cast<std::size_t>(k)];
  }
  std::span<const double> ring(int j) const {
    return std::span<const double>(data).subspan(
        static_cast<std::size_t>(j + grid.n) * static_cast<std::size_t>(grid.n_phi),
        static_cast<std::size_t>(grid.n_phi));
  }

  friend bool operator==(const FieldSample&, const FieldSample&) = default;
};

/// B_eq w with w drawn per draw_complex_std_normal.
ModeState initial_state(const FilterBank& bank, int m, Rng& rng);

/// A state + B w. Real matrices act on real and imaginary parts alike.
ModeState march_step(const ModeState& state, const Eigen::Ref<const Matrix>& A,
                     const Eigen::Ref<const Matrix>& B, int m, Rng& rng);

/// Real ring T(phi_k) = sum_{|m| <= m_max} g_m e^{i m phi_k}, g_{-m} = conj(g_m),
/// at scale 1. Im g_0 is ignored. When n_phi = 2 m_max the modes +-m_max share
/// the Nyquist bin, which receives 2 Re g_{m_max}.
class RingSynthesizer {
 public:
  RingSynthesizer(int m_max, int n_phi);
  ~RingSynthesizer();
  RingSynthesizer(const RingSynthesizer&) = delete;
  RingSynthesizer& operator=(const RingSynthesizer&) = delete;

  int m_max() const noexcept { return m_max_; }
  int n_phi() const noexcept { return n_phi_; }

  /// `modes` holds g_0..g_{m_max}; `out` receives n_phi values.
  void synthesize(std::span<const Complex> modes, std::span<double> out);

 private:
  struct Plan;
  int m_max_;
  int n_phi_;
  std::unique_ptr<Plan> plan_;
};

/// Convenience wrapper around RingSynthesizer.
std::vector<double> synthesize_ring(std::span<const Complex> modes, int n_phi);

/// Field generator for one bank. Holds per-instance FFT buffers, so use one
/// Sampler per thread; the bank is only read.
class Sampler {
 public:
  explicit Sampler(const FilterBank& bank);

  const FilterBank& bank() const noexcept { return *bank_; }

  /// Sample `sample` of `seed`.
  FieldSample generate(std::uint64_t seed, std::uint64_t sample);
  FieldSample generate(Rng& rng);

  /// g_m^{(0)} for every latitude row (2n+1) and mode (m_max+1), drawn with
  /// exactly the noise generate() would use; row-major [row][m].
  std::vector<Complex> mode_profile(Rng& rng);

 private:
  template <class RowFn>
  void sweep(Rng& rng, RowFn&& on_row);

  const FilterBank* bank_;
  RingSynthesizer synth_;
  std::vector<Complex> equator_;  // [m][q]
  std::vector<Complex> state_;    // [m][q]
  std::vector<Complex> row_;      // g_m^{(0)} for the current latitude
};

}  // namespace sgrf
