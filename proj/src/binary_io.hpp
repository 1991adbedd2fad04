#pragma once

// Little-endian packing and spectrum JSON shared by the bank and field
// formats. Internal to the library.

#include <bit>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sgrf/spectrum.hpp"

namespace sgrf::detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

inline std::uint32_t get_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

inline void put_f64(std::string& out, std::span<const double> values) {
  const std::size_t start = out.size();
  out.resize(start + 8 * values.size());
  char* dst = out.data() + start;
  for (double v : values) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) *dst++ = static_cast<char>((bits >> (8 * b)) & 0xffu);
  }
}

inline void get_f64(const unsigned char* p, std::span<double> values) {
  for (double& v : values) {
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t(p[b]) << (8 * b);
    v = std::bit_cast<double>(bits);
    p += 8;
  }
}

inline nlohmann::json complex_list(std::span<const Complex> values) {
  nlohmann::json out = nlohmann::json::array();
  for (const Complex& v : values) out.push_back({v.real(), v.imag()});
  return out;
}

inline std::vector<Complex> parse_complex_list(const nlohmann::json& j) {
  std::vector<Complex> out;
  for (const auto& item : j) {
    out.emplace_back(item.at(0).get<double>(), item.at(1).get<double>());
  }
  return out;
}

inline nlohmann::json spectrum_json(const PowerSpectrum& spec) {
  return {{"M", spec.order()},
          {"amplitude", spec.amplitude()},
          {"kappas", complex_list(spec.kappas())},
          {"lambdas", complex_list(spec.lambdas())},
          {"residues", complex_list(spec.residues())}};
}

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace sgrf::detail
