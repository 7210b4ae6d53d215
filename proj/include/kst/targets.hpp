#pragma once

#include <vector>

#include "kst/superposition.hpp"

namespace kst {

/// Builtin target registry: const1, xplusy, xy, sin2pi, runge. All carry
/// Lipschitz constants for certified sup-norm bounds.
const std::vector<TargetFunction>& builtin_targets();

/// Looks up a registry name, otherwise parses the spec as an expression.
TargetFunction make_target(const std::string& spec);

}  // namespace kst
