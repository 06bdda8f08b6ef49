#pragma once

#include <string>
#include <vector>

#include "gridsec/grid_model.hpp"

namespace gridsec {

/// Result of a MATPOWER import. Bus ids are renumbered to contiguous 1..n in
/// ascending order of the original ids; original_bus_ids[k] is the source id
/// of renumbered bus k+1.
struct MatpowerCase {
  GridTopology topology;
  std::vector<int> original_bus_ids;
};

/// Parses the bus and branch tables of a MATPOWER case file (desk-scale
/// subset: bus numbers, branch from/to, reactance x). Susceptance magnitude is
/// 1/|x|. Throws ParseError with a line number on malformed input.
MatpowerCase import_matpower(const std::string& text);

}  // namespace gridsec
