#include "sgrf/sampler.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <string>

#include "sgrf/error.hpp"

namespace sgrf {
namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex mutex;
  return mutex;
}

}  // namespace

struct RingSynthesizer::Plan {
  fftw_complex* in = nullptr;
  double* out = nullptr;
  fftw_plan plan = nullptr;

  ~Plan() {
    std::lock_guard lock(planner_mutex());
    if (plan) fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
};

RingSynthesizer::RingSynthesizer(int m_max, int n_phi)
    : m_max_(m_max), n_phi_(n_phi), plan_(std::make_unique<Plan>()) {
  if (m_max < 0 || n_phi < 1 || n_phi < 2 * m_max) {
    throw_usage("grid.invalid", "ring synthesis needs n_phi >= 2*m_max");
  }
  const auto bins = static_cast<std::size_t>(n_phi / 2 + 1);
  std::lock_guard lock(planner_mutex());
  plan_->in = fftw_alloc_complex(bins);
  plan_->out = fftw_alloc_real(static_cast<std::size_t>(n_phi));
  if (!plan_->in || !plan_->out) throw std::bad_alloc();
  // FFTW_ESTIMATE picks the same algorithm every run, which keeps output
  // bit-reproducible.
  plan_->plan = fftw_plan_dft_c2r_1d(n_phi, plan_->in, plan_->out, FFTW_ESTIMATE);
  if (!plan_->plan) throw_numeric("fft.plan", "FFTW could not plan a length-" +
                                                   std::to_string(n_phi) + " transform");
}

RingSynthesizer::~RingSynthesizer() = default;

void RingSynthesizer::synthesize(std::span<const Complex> modes, std::span<double> out) {
  if (modes.size() != static_cast<std::size_t>(m_max_ + 1) ||
      out.size() != static_cast<std::size_t>(n_phi_)) {
    throw_usage("synth.shape", "ring synthesis buffer sizes do not match");
  }
  const int bins = n_phi_ / 2 + 1;
  fftw_complex* in = plan_->in;
  for (int k = 0; k < bins; ++k) {
    in[k][0] = 0.0;
    in[k][1] = 0.0;
  }
  in[0][0] = modes[0].real();
  for (int m = 1; m <= m_max_; ++m) {
    const Complex g = modes[static_cast<std::size_t>(m)];
    if (2 * m == n_phi_) {
      in[m][0] = 2.0 * g.real();
    } else {
      in[m][0] = g.real();
      in[m][1] = g.imag();
    }
  }
  fftw_execute(plan_->plan);
  std::copy(plan_->out, plan_->out + n_phi_, out.begin());
}

std::vector<double> synthesize_ring(std::span<const Complex> modes, int n_phi) {
  if (modes.empty()) throw_usage("synth.shape", "at least g_0 is required");
  RingSynthesizer synth(static_cast<int>(modes.size()) - 1, n_phi);
  std::vector<double> out(static_cast<std::size_t>(n_phi));
  synth.synthesize(modes, out);
  return out;
}

ModeState initial_state(const FilterBank& bank, int m, Rng& rng) {
  const int order = bank.order();
  ModeState w(order);
  for (int q = 0; q < order; ++q) w(q) = draw_complex_std_normal(rng, m);
  return Matrix(bank.equator_factor(m)).cast<Complex>() * w;
}

ModeState march_step(const ModeState& state, const Eigen::Ref<const Matrix>& A,
                     const Eigen::Ref<const Matrix>& B, int m, Rng& rng) {
  ModeState w(B.cols());
  for (Eigen::Index q = 0; q < w.size(); ++q) w(q) = draw_complex_std_normal(rng, m);
  return A.cast<Complex>() * state + B.cast<Complex>() * w;
}

Sampler::Sampler(const FilterBank& bank)
    : bank_(&bank), synth_(bank.m_max(), bank.grid().n_phi) {
  const auto size = static_cast<std::size_t>(bank.m_max() + 1) *
                    static_cast<std::size_t>(bank.order());
  equator_.resize(size);
  state_.resize(size);
  row_.resize(static_cast<std::size_t>(bank.m_max() + 1));
}

template <class RowFn>
void Sampler::sweep(Rng& rng, RowFn&& on_row) {
  const FilterBank& bank = *bank_;
  const int order = bank.order();
  const int modes = bank.m_max() + 1;
  const auto mm = static_cast<std::size_t>(order) * static_cast<std::size_t>(order);
  Complex w[64];
  if (order > 64) throw_usage("sampler.order", "spectrum order above 64 is not supported");

  auto emit = [&](int j, const std::vector<Complex>& states) {
    for (int m = 0; m < modes; ++m) {
      row_[static_cast<std::size_t>(m)] = states[static_cast<std::size_t>(m * order)];
    }
    on_row(j, row_);
  };

  const double* eq = bank.equator_data().data();
  for (int m = 0; m < modes; ++m) {
    for (int q = 0; q < order; ++q) w[q] = draw_complex_std_normal(rng, m);
    const double* B = eq + static_cast<std::size_t>(m) * mm;
    Complex* x = equator_.data() + static_cast<std::size_t>(m * order);
    for (int r = 0; r < order; ++r) {
      Complex acc = 0.0;
      for (int c = 0; c <= r; ++c) acc += B[r * order + c] * w[c];
      x[r] = acc;
    }
  }
  emit(0, equator_);

  const double* steps = bank.step_data().data();
  Complex prev[64];
  for (int half = 0; half < 2; ++half) {
    state_ = equator_;
    for (int i = 0; i < bank.n(); ++i) {
      const int s = half * bank.n() + i;
      for (int m = 0; m < modes; ++m) {
        for (int q = 0; q < order; ++q) w[q] = draw_complex_std_normal(rng, m);
        const double* A = steps + bank.step_offset(m, s);
        const double* B = A + mm;
        Complex* x = state_.data() + static_cast<std::size_t>(m * order);
        std::copy(x, x + order, prev);
        for (int r = 0; r < order; ++r) {
          Complex acc = 0.0;
          for (int c = 0; c < order; ++c) acc += A[r * order + c] * prev[c];
          for (int c = 0; c <= r; ++c) acc += B[r * order + c] * w[c];
          x[r] = acc;
        }
      }
      emit(bank.step_target(s), state_);
    }
  }
}

FieldSample Sampler::generate(std::uint64_t seed, std::uint64_t sample) {
  Rng rng(seed, sample);
  FieldSample field = generate(rng);
  field.seed = seed;
  field.sample = sample;
  return field;
}

FieldSample Sampler::generate(Rng& rng) {
  FieldSample field;
  field.grid = bank_->grid();
  const auto n_phi = static_cast<std::size_t>(field.grid.n_phi);
  field.data.assign(static_cast<std::size_t>(field.grid.rows()) * n_phi, 0.0);
  sweep(rng, [&](int j, std::span<const Complex> g) {
    const auto row = static_cast<std::size_t>(j + field.grid.n);
    synth_.synthesize(g, std::span<double>(field.data).subspan(row * n_phi, n_phi));
  });
  return field;
}

std::vector<Complex> Sampler::mode_profile(Rng& rng) {
  const int n = bank_->n();
  const auto modes = static_cast<std::size_t>(bank_->m_max() + 1);
  std::vector<Complex> out(static_cast<std::size_t>(2 * n + 1) * modes);
  sweep(rng, [&](int j, std::span<const Complex> g) {
    std::copy(g.begin(), g.end(), out.begin() + static_cast<std::ptrdiff_t>(
                                                    static_cast<std::size_t>(j + n) * modes));
  });
  return out;
}

}  // namespace sgrf
