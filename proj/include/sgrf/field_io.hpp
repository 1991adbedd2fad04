#pragma once

// Field file: u32 little-endian header length | JSON header
// {n, m_max, n_phi, seed, sample, spectrum, grid_convention}
// | (2n+1) x n_phi float64 little-endian, row-major, row 0 <-> z_{-n}.

#include <string>

#include "sgrf/sampler.hpp"

namespace sgrf {

std::string serialize_field(const FieldSample& field, const PowerSpectrum& spec);
FieldSample deserialize_field(const std::string& bytes);

void save_field(const FieldSample& field, const PowerSpectrum& spec, const std::string& path);
FieldSample load_field(const std::string& path);

/// One line per latitude: z, then n_phi comma-separated values.
void save_field_csv(const FieldSample& field, const std::string& path);

}  // namespace sgrf
