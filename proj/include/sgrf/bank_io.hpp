#pragma once

// Filter bank file:
//   "SGRF" | u32 version | u32 header length | JSON header
//   | float64 B_eq blocks, m = 0..m_max
//   | float64 [A, B] blocks, for m = 0..m_max, for steps north 1..n then south -1..-n
//   | u32 CRC-32 of every preceding byte
// All integers and floats little-endian, matrices row-major.

#include <string>

#include "sgrf/filterbank.hpp"

namespace sgrf {

inline constexpr std::uint32_t kBankVersion = 1;

std::string serialize_bank(const FilterBank& bank);
FilterBank deserialize_bank(const std::string& bytes);

/// Errors: "io.open" (kIo), "bank.format", "bank.truncated", "bank.checksum".
void save_bank(const FilterBank& bank, const std::string& path);
FilterBank load_bank(const std::string& path);

}  // namespace sgrf
