#include "sgrf/field_io.hpp"

#include <cstdio>

#include "binary_io.hpp"
#include "sgrf/error.hpp"

namespace sgrf {

std::string serialize_field(const FieldSample& field, const PowerSpectrum& spec) {
  const nlohmann::json header = {{"n", field.grid.n},
                                 {"m_max", field.grid.m_max},
                                 {"n_phi", field.grid.n_phi},
                                 {"seed", field.seed},
                                 {"sample", field.sample},
                                 {"spectrum", detail::spectrum_json(spec)},
                                 {"grid_convention", std::string(kGridConvention)}};
  const std::string text = header.dump();
  std::string out;
  out.reserve(4 + text.size() + 8 * field.data.size());
  detail::put_u32(out, static_cast<std::uint32_t>(text.size()));
  out += text;
  detail::put_f64(out, field.data);
  return out;
}

FieldSample deserialize_field(const std::string& bytes) {
  if (bytes.size() < 4) throw_io("field.truncated", "field file is truncated");
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t header_len = detail::get_u32(p);
  if (bytes.size() < 4 + header_len) throw_io("field.truncated", "field file is truncated");
  FieldSample field;
  try {
    const auto header = nlohmann::json::parse(
        bytes.begin() + 4, bytes.begin() + 4 + static_cast<std::ptrdiff_t>(header_len));
    field.grid = build_grid(header.at("n").get<int>(), header.at("m_max").get<int>(),
                            header.at("n_phi").get<int>());
    field.seed = header.at("seed").get<std::uint64_t>();
    field.sample = header.at("sample").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw_io("field.format", std::string("malformed field header: ") + e.what());
  }
  const std::size_t count =
      static_cast<std::size_t>(field.grid.rows()) * static_cast<std::size_t>(field.grid.n_phi);
  if (bytes.size() != 4 + header_len + 8 * count) {
    throw_io("field.truncated", "field payload size does not match its header");
  }
  field.data.resize(count);
  detail::get_f64(p + 4 + header_len, field.data);
  return field;
}

void save_field(const FieldSample& field, const PowerSpectrum& spec, const std::string& path) {
  detail::write_file(path, serialize_field(field, spec));
}

FieldSample load_field(const std::string& path) {
  return deserialize_field(detail::read_file(path));
}

void save_field_csv(const FieldSample& field, const std::string& path) {
  std::string out;
  char buf[40];
  for (int j = -field.grid.n; j <= field.grid.n; ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", field.grid.z_at(j));
    out += buf;
    for (double v : field.ring(j)) {
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      out += buf;
    }
    out += '\n';
  }
  detail::write_file(path, out);
}

}  // namespace sgrf
