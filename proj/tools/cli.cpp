#include "cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgrf/bank_io.hpp"
#include "sgrf/error.hpp"
#include "sgrf/field_io.hpp"
#include "sgrf/filterbank.hpp"
#include "sgrf/validate.hpp"

namespace sgrf::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct SpectrumArgs {
  std::optional<double> squared_amplitude;
  std::vector<std::string> kappas;
  double amplitude = 1.0;
};

struct Config {
  int threads = 1;
  SpectrumArgs spectrum;
  int n = 0;
  std::optional<int> m_max;
  std::optional<int> n_phi;
  std::string output;
  std::string bank;
  std::optional<std::uint64_t> seed;
  std::uint64_t count = 1;
  bool csv = false;
  std::string resolutions = "4,8,16,32";
  std::uint64_t samples = 40'000;
  std::string report;
  std::string curves_dir;
  bool pointwise = false;
  int l_max = 10;
};

void add_spectrum_options(CLI::App* cmd, SpectrumArgs& s) {
  cmd->add_option("--squared-amplitude", s.squared_amplitude,
                  "M = 2 family C_l = (a2 + l^2 (l+1)^2)^-1");
  cmd->add_option("--kappa", s.kappas, "operator root re,im (repeat for each root)")
      ->allow_extra_args(false);
  cmd->add_option("--amplitude", s.amplitude, "overall multiplier on C_l")->capture_default_str();
}

Complex parse_complex(const std::string& text) {
  const auto comma = text.find(',');
  try {
    std::size_t used = 0;
    if (comma == std::string::npos) {
      const double re = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {re, 0.0};
    }
    const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
    const double re = std::stod(a, &used);
    if (used != a.size()) throw std::invalid_argument(text);
    const double im = std::stod(b, &used);
    if (used != b.size()) throw std::invalid_argument(text);
    return {re, im};
  } catch (const std::logic_error&) {
    throw_usage("cli.kappa", "cannot parse kappa '" + text + "'; expected re,im");
  }
}

PowerSpectrum build_spectrum(const SpectrumArgs& s) {
  if (s.squared_amplitude && !s.kappas.empty()) {
    throw_usage("cli.spectrum", "give either --squared-amplitude or --kappa, not both");
  }
  if (s.squared_amplitude) return PowerSpectrum::from_squared_amplitude(*s.squared_amplitude, s.amplitude);
  if (s.kappas.empty()) {
    throw_usage("cli.spectrum", "a spectrum is required (--squared-amplitude or --kappa)");
  }
  std::vector<Complex> kappas;
  for (const auto& k : s.kappas) kappas.push_back(parse_complex(k));
  return PowerSpectrum::from_kappas(std::move(kappas), s.amplitude);
}

std::vector<int> parse_resolutions(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int value = 0;
    try {
      value = std::stoi(item, &used);
    } catch (const std::logic_error&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || value < 1) {
      throw_usage("cli.resolutions", "bad resolution list '" + text + "'");
    }
    out.push_back(value);
  }
  if (out.empty()) throw_usage("cli.resolutions", "empty resolution list");
  return out;
}

json complex_json(std::span<const Complex> values) {
  json out = json::array();
  for (const auto& v : values) out.push_back({v.real(), v.imag()});
  return out;
}

std::string fixed(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  return buf;
}

// Human-readable tables: 15 significant digits hide product-form rounding.
std::string display(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v + 0.0);
  return buf;
}

std::string display(Complex v) {
  const std::string im = display(v.imag());
  return display(v.real()) + (im.front() == '-' ? "" : "+") + im + "i";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("io.open", "cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw_io("io.write", "failed writing '" + path + "'");
}

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw_io("io.mkdir", "cannot create directory '" + dir + "': " + ec.message());
}

int cmd_precompute(const Config& c, std::ostream& out) {
  const PowerSpectrum spec = build_spectrum(c.spectrum);
  const int m_max = c.m_max.value_or(c.n);
  const LatitudeGrid grid = build_grid(c.n, m_max, c.n_phi.value_or(2 * m_max));
  const FilterBank bank = precompute(spec, grid, c.threads);
  save_bank(bank, c.output);
  out << "wrote " << c.output << " (n=" << grid.n << ", m_max=" << grid.m_max
      << ", n_phi=" << grid.n_phi << ", M=" << spec.order() << ")\n";
  return kExitOk;
}

int cmd_sample(const Config& c, std::ostream& out) {
  const FilterBank bank = load_bank(c.bank);
  make_dir(c.output);
  Sampler sampler(bank);
  for (std::uint64_t s = 0; s < c.count; ++s) {
    const FieldSample field = sampler.generate(*c.seed, s);
    char name[32];
    std::snprintf(name, sizeof name, "sample_%06llu", static_cast<unsigned long long>(s));
    const fs::path base = fs::path(c.output) / name;
    save_field(field, bank.spectrum(), base.string() + ".field");
    if (c.csv) save_field_csv(field, base.string() + ".csv");
  }
  out << "wrote " << c.count << " sample(s) to " << c.output << "\n";
  return kExitOk;
}

json curve_json(const CovarianceCurve& curve) {
  return {{"gamma", curve.gamma},
          {"analytic", curve.analytic},
          {"empirical", curve.empirical},
          {"stderr", curve.standard_error}};
}

std::string curve_csv(const CovarianceCurve& curve) {
  std::string text = "gamma,analytic,empirical,stderr\n";
  for (std::size_t i = 0; i < curve.gamma.size(); ++i) {
    text += fixed(curve.gamma[i]) + "," + fixed(curve.analytic[i]) + "," +
            fixed(curve.empirical[i]) + "," + fixed(curve.standard_error[i]) + "\n";
  }
  return text;
}

int cmd_validate(const Config& c, std::ostream& out) {
  const PowerSpectrum spec = build_spectrum(c.spectrum);
  const std::vector<int> resolutions = parse_resolutions(c.resolutions);
  StudyOptions options;
  options.samples = c.samples;
  options.seed = *c.seed;
  options.threads = c.threads;
  options.rotate = !c.pointwise;
  const ConvergenceReport report = convergence_study(spec, resolutions, options);

  json j;
  j["samples"] = report.samples;
  j["seed"] = report.seed;
  j["estimator"] = options.rotate ? "rotation-averaged" : "pointwise";
  j["resolutions"] = resolutions;
  json eq = json::array(), mer = json::array(), curves = json::array();
  for (const auto& r : report.results) {
    eq.push_back(r.equator_error);
    mer.push_back(r.meridian_error);
    curves.push_back({{"n", r.n}, {"equator", curve_json(r.equator)},
                      {"meridian", curve_json(r.meridian)}});
  }
  j["errors"] = {{"equator", eq}, {"meridian", mer}};
  j["slope"] = {{"equator", report.equator_slope}, {"meridian", report.meridian_slope}};
  j["curves"] = curves;
  if (!c.report.empty()) write_text(c.report, j.dump(2) + "\n");
  if (!c.curves_dir.empty()) {
    make_dir(c.curves_dir);
    for (const auto& r : report.results) {
      const std::string stem = (fs::path(c.curves_dir) / ("n" + std::to_string(r.n))).string();
      write_text(stem + "_equator.csv", curve_csv(r.equator));
      write_text(stem + "_meridian.csv", curve_csv(r.meridian));
    }
  }
  json summary = j;
  summary.erase("curves");
  out << summary.dump(2) << "\n";
  return kExitOk;
}

int cmd_spectrum_info(const Config& c, std::ostream& out) {
  const PowerSpectrum spec = build_spectrum(c.spectrum);
  if (c.l_max < 0) throw_usage("cli.l_max", "--l-max must be non-negative");
  out << "M = " << spec.order() << "\n";
  out << "amplitude = " << display(spec.amplitude()) << "\n";
  for (int i = 0; i < spec.order(); ++i) {
    const auto k = spec.kappas()[static_cast<std::size_t>(i)];
    const auto l = spec.lambdas()[static_cast<std::size_t>(i)];
    const auto b = spec.residues()[static_cast<std::size_t>(i)];
    out << "kappa[" << i << "] = " << display(k) << "  lambda = " << display(l)
        << "  b = " << display(b) << "\n";
  }
  out << "l,C_l\n";
  for (int l = 0; l <= c.l_max; ++l) out << l << "," << display(angular_power(spec, l)) << "\n";
  return kExitOk;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kUsage:
      return kExitUsage;
    case ErrorKind::kNumeric:
      return kExitNumeric;
    case ErrorKind::kIo:
      return kExitIo;
  }
  return kExitNumeric;
}

std::string one_line(std::string s) {
  for (char& ch : s) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

int default_threads() {
  if (const char* env = std::getenv("SGRF_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096) return static_cast<int>(v);
  }
  return 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  c.threads = default_threads();

  CLI::App app{"Isotropic Gaussian random fields on the sphere by latitude marching"};
  app.require_subcommand(1);
  app.add_option("--threads", c.threads, "worker threads (env SGRF_THREADS)")
      ->check(CLI::Range(1, 4096));

  auto* pre = app.add_subcommand("precompute", "build and save a filter bank");
  add_spectrum_options(pre, c.spectrum);
  pre->add_option("--n", c.n, "latitudes per hemisphere")->required()->check(CLI::PositiveNumber);
  pre->add_option("--m-max", c.m_max, "highest azimuthal mode (default n)");
  pre->add_option("--n-phi", c.n_phi, "longitudes per ring (default 2 m_max)");
  pre->add_option("-o,--output", c.output, "bank file")->required();
  pre->add_option("--threads", c.threads)->check(CLI::Range(1, 4096));

  auto* smp = app.add_subcommand("sample", "generate fields from a bank");
  smp->add_option("--bank", c.bank, "bank file")->required();
  smp->add_option("--seed", c.seed, "64-bit seed")->required();
  smp->add_option("--count", c.count, "number of samples")->capture_default_str();
  smp->add_option("-o,--output", c.output, "output directory")->required();
  smp->add_flag("--csv", c.csv, "also write CSV files");
  smp->add_option("--threads", c.threads)->check(CLI::Range(1, 4096));

  auto* val = app.add_subcommand("validate", "covariance convergence study");
  add_spectrum_options(val, c.spectrum);
  val->add_option("--resolutions", c.resolutions, "ascending list of n")->capture_default_str();
  val->add_option("--samples", c.samples, "samples per resolution")->capture_default_str();
  val->add_option("--seed", c.seed, "64-bit seed")->required();
  val->add_option("--report", c.report, "JSON report path");
  val->add_option("--curves-dir", c.curves_dir, "directory for CSV curves");
  val->add_flag("--pointwise", c.pointwise, "disable longitude rotation averaging");
  val->add_option("--threads", c.threads)->check(CLI::Range(1, 4096));

  auto* info = app.add_subcommand("spectrum-info", "print C_l, lambda_i and b_i");
  add_spectrum_options(info, c.spectrum);
  info->add_option("--l-max", c.l_max, "last degree in the table")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  try {
    if (pre->parsed()) return cmd_precompute(c, out);
    if (smp->parsed()) return cmd_sample(c, out);
    if (val->parsed()) return cmd_validate(c, out);
    return cmd_spectrum_info(c, out);
  } catch (const Error& e) {
    err << "error: " << e.code() << ": " << one_line(e.what()) << "\n";
    return exit_code(e.kind());
  } catch (const std::bad_alloc&) {
    err << "error: memory: out of memory\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    err << "error: internal: " << one_line(e.what()) << "\n";
    return kExitNumeric;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace sgrf::cli
