#pragma once

#include <string>
#include <vector>

#include "cocycle/family.hpp"

namespace cocycle {

// schrodinger-const, schrodinger-anderson, cd-n1, rotation-diagonal-tangency
AffineFamily make_preset(const std::string& name, uint64_t seed = 1);
std::vector<std::string> preset_names();

}  // namespace cocycle
