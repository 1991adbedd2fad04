#include "sgrf/bank_io.hpp"

#include <zlib.h>

#include <cmath>
#include <fstream>
#include <iterator>

#include "binary_io.hpp"
#include "sgrf/error.hpp"

namespace sgrf {
namespace detail {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_io("io.open", "cannot open '" + path + "' for reading");
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw_io("io.read", "failed reading '" + path + "'");
  return bytes;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_io("io.open", "cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw_io("io.write", "failed writing '" + path + "'");
}

}  // namespace detail

namespace {

constexpr char kMagic[4] = {'S', 'G', 'R', 'F'};

std::uint32_t crc32_of(const std::string& bytes, std::size_t length) {
  uLong crc = crc32(0L, Z_NULL, 0);
  const auto* p = reinterpret_cast<const Bytef*>(bytes.data());
  std::size_t done = 0;
  while (done < length) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(length - done, 1u << 30));
    crc = crc32(crc, p + done, chunk);
    done += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::string serialize_bank(const FilterBank& bank) {
  const auto& grid = bank.grid();
  nlohmann::json header = detail::spectrum_json(bank.spectrum());
  header["n"] = grid.n;
  header["m_max"] = grid.m_max;
  header["n_phi"] = grid.n_phi;
  header["grid_convention"] = std::string(kGridConvention);
  const std::string text = header.dump();

  std::string out(kMagic, 4);
  detail::put_u32(out, kBankVersion);
  detail::put_u32(out, static_cast<std::uint32_t>(text.size()));
  out += text;
  out.reserve(out.size() + 8 * (bank.equator_data().size() + bank.step_data().size()) + 4);
  detail::put_f64(out, bank.equator_data());
  // File order is mode-major; memory order is step-major.
  const std::size_t mm = static_cast<std::size_t>(bank.order()) * bank.order();
  for (int m = 0; m <= bank.m_max(); ++m) {
    for (int s = 0; s < bank.step_count(); ++s) {
      detail::put_f64(out, bank.step_data().subspan(bank.step_offset(m, s), 2 * mm));
    }
  }
  detail::put_u32(out, crc32_of(out, out.size()));
  return out;
}

FilterBank deserialize_bank(const std::string& bytes) {
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  if (bytes.size() < 12 || bytes.compare(0, 4, kMagic, 4) != 0) {
    throw_io("bank.format", "not a filter bank file (bad magic)");
  }
  const std::uint32_t version = detail::get_u32(p + 4);
  if (version != kBankVersion) {
    throw_io("bank.format", "unsupported bank version " + std::to_string(version));
  }
  const std::size_t header_len = detail::get_u32(p + 8);
  if (bytes.size() < 12 + header_len + 4) throw_io("bank.truncated", "bank file is truncated");

  nlohmann::json header;
  int n = 0, m_max = 0, n_phi = 0, order = 0;
  double amplitude = 1.0;
  std::vector<Complex> kappas;
  try {
    header = nlohmann::json::parse(bytes.begin() + 12,
                                   bytes.begin() + 12 + static_cast<std::ptrdiff_t>(header_len));
    n = header.at("n").get<int>();
    m_max = header.at("m_max").get<int>();
    n_phi = header.at("n_phi").get<int>();
    order = header.at("M").get<int>();
    amplitude = header.at("amplitude").get<double>();
    kappas = detail::parse_complex_list(header.at("kappas"));
    if (header.at("grid_convention").get<std::string>() != kGridConvention) {
      throw_io("bank.format", "unknown grid convention");
    }
  } catch (const nlohmann::json::exception& e) {
    throw_io("bank.format", std::string("malformed bank header: ") + e.what());
  }
  if (order < 1 || static_cast<int>(kappas.size()) != order || n < 1 || m_max < 1 ||
      n > (1 << 20) || m_max > (1 << 20)) {
    throw_io("bank.format", "inconsistent bank header");
  }

  const std::size_t mm = static_cast<std::size_t>(order) * static_cast<std::size_t>(order);
  const std::size_t modes = static_cast<std::size_t>(m_max) + 1;
  const std::size_t steps = 2 * static_cast<std::size_t>(n);
  const std::size_t eq_count = modes * mm;
  const std::size_t step_count = modes * steps * 2 * mm;
  const std::size_t expected = 12 + header_len + 8 * (eq_count + step_count) + 4;
  if (bytes.size() < expected) throw_io("bank.truncated", "bank file is truncated");
  if (bytes.size() > expected) throw_io("bank.format", "trailing bytes after bank payload");
  if (detail::get_u32(p + expected - 4) != crc32_of(bytes, expected - 4)) {
    throw_io("bank.checksum", "bank checksum mismatch (file corrupted)");
  }

  PowerSpectrum spec = PowerSpectrum::from_kappas(kappas, amplitude);
  LatitudeGrid grid = build_grid(n, m_max, n_phi);
  std::vector<double> equator(eq_count);
  std::vector<double> step_data(step_count);
  const unsigned char* cursor = p + 12 + header_len;
  detail::get_f64(cursor, equator);
  cursor += 8 * eq_count;
  for (std::size_t m = 0; m < modes; ++m) {
    for (std::size_t s = 0; s < steps; ++s) {
      const std::size_t offset = ((s * modes + m) * 2) * mm;
      detail::get_f64(cursor, std::span<double>(step_data).subspan(offset, 2 * mm));
      cursor += 16 * mm;
    }
  }
  return FilterBank(std::move(grid), std::move(spec), std::move(equator), std::move(step_data));
}

void save_bank(const FilterBank& bank, const std::string& path) {
  detail::write_file(path, serialize_bank(bank));
}

FilterBank load_bank(const std::string& path) { return deserialize_bank(detail::read_file(path)); }

}  // namespace sgrf
