#pragma once

#include <set>
#include <string>
#include <vector>

#include "interface.hpp"

namespace fkr {

struct SvgStyle {
    double scale = 40;
    bool highlight_edges = true;
};

// Rhombi coloured by type; listed edges drawn over them (delta in red, omega in blue).
std::string rhombi_svg(const std::vector<Rhombus>& rhombi, const std::set<PEdge>& delta,
                       const std::set<PEdge>& omega, const SvgStyle& st = {});
std::string tiling_svg(const Tiling& t, const SvgStyle& st = {});
// Projection of the pinned interface of a 111 configuration.
std::string interface_svg(const SpinConfig& c, const SvgStyle& st = {});

}  // namespace fkr
