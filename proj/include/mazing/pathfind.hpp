#pragma once
// 4-connected grid path planning. Every step costs 1; stepping into a burning
// cell additionally costs fire_penalty * (1 - risk_factor), so a fully
// risk-seeking planner (risk_factor = 1) ignores fire entirely while a
// cautious one (risk_factor = 0) pays the full penalty. Fires never block:
// if the only route crosses fire, that route is still returned.

#include <optional>
#include <vector>

#include "mazing/common.hpp"
#include "mazing/maze.hpp"

namespace mazing::world {

inline constexpr double kFirePenalty = 20.0;

struct PathPlan {
    std::vector<Cell> cells;  // from -> ... -> to, inclusive
    double cost = 0;          // summed step costs
    int steps() const { return static_cast<int>(cells.size()) - 1; }
    bool crosses_fire = false;
};

// Deterministic Dijkstra (ties broken on cell index). Returns nullopt when
// `to` is unreachable from `from`.
std::optional<PathPlan> plan_path(const MazeMap& map, const FireField& fires, Cell from,
                                  Cell to, double risk_factor,
                                  double fire_penalty = kFirePenalty);

}  // namespace mazing::world
