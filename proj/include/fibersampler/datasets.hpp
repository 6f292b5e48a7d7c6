#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fibersampler/io.hpp"

namespace fibersampler::datasets {

// US Navy population as of January 20, 2021 by rank x race x gender.
// navy_officer_10x6x2 keeps the admiral, O-6..O-1 and W-4..W-2 columns;
// navy_full_19x6x2 appends E-9..E-1.
Dataset navy_officer();
Dataset navy_full();

// The 3x3x3 table with every two-way margin equal to 3 that basic moves
// cannot leave at depth 0.
Dataset isolated_3x3x3();

std::vector<std::string> names();
std::optional<Dataset> find(const std::string& name);

}  // namespace fibersampler::datasets
