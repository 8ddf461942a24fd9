#pragma once

#include <string>
#include <vector>

#include "cnorm/serialize.hpp"

namespace cnorm::tool {

/// Named sweeps: comparison (the 42-cell method grid), k1k2, f, d, k3, m.
GridFile preset_grid(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace cnorm::tool
