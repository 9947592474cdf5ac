#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rhp/model.hpp"
#include "rhp/sim.hpp"

namespace rhp {

// True when every agent moves on a grid with the same dimensions.
bool renderable(const Scenario& sc);

// Grid picture of the executed behaviors up to time `until`: walls and service cells, one
// polyline per agent through the cells it reached, one marker per non-silent action started.
std::string render_svg(const Scenario& sc, const std::vector<Behavior>& behaviors, std::int64_t until);

// Snapshot instants: every distinct start time of a non-silent action, then the end of the run.
std::vector<std::int64_t> snapshot_times(const Scenario& sc, const std::vector<Behavior>& behaviors,
                                         std::int64_t end_time);

}  // namespace rhp
