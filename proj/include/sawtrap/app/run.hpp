#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "sawtrap/app/config.hpp"

namespace sawtrap::app {

MaterialSystem resolve_material(const RunConfig& config);

/// Executes one command and returns the files it wrote. Validation problems
/// raise ValidationError, numerical failures NumericalError.
std::vector<std::filesystem::path> run(const RunConfig& config, std::ostream& log);

}  // namespace sawtrap::app
