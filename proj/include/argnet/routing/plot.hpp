#pragma once

#include <filesystem>
#include <string>

#include "argnet/routing/router.hpp"

namespace argnet::routing {

/// Static SVG line chart of macro F1 and fraction routed against threshold.
std::string render_curve_svg(const RoutingCurve& c, const std::string& title);
void write_curve_svg(const std::filesystem::path& path, const RoutingCurve& c, const std::string& title);

}  // namespace argnet::routing
