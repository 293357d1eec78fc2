#pragma once

#include <optional>
#include <string>
#include <vector>

#include <qnls/scenario.hpp>

namespace qnls {

/// The built-in worked examples as ready-to-run scenarios (ex31A through
/// ex53), plus `free`: a zero-potential reference run whose conservation
/// defects isolate pure discretization error.
const std::vector<Scenario>& builtin_presets();

std::optional<Scenario> find_preset(const std::string& id);

}  // namespace qnls
