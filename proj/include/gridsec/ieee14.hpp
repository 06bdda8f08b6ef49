#pragma once

#include <cstdint>
#include <string>

#include "gridsec/grid_model.hpp"

namespace gridsec {

/// Embedded copy of the standard IEEE 14-bus MATPOWER case (14 buses,
/// 20 branches). Kept in the binary so "ieee14" works without data files.
const std::string& ieee14_matpower_text();

/// FNV-1a 64 checksum of ieee14_matpower_text(); guards the vendored data
/// against accidental edits.
std::uint64_t ieee14_checksum();

GridTopology ieee14_topology();

}  // namespace gridsec
