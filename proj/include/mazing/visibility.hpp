#pragma once
// Sight and occlusion queries. A segment is blocked by every wall cell whose
// closed unit square it touches, so sight lines squeezing diagonally between
// two wall corners are conservatively blocked. The closed-square semantics
// also make every query exactly symmetric in its endpoints.

#include "mazing/common.hpp"
#include "mazing/maze.hpp"

namespace mazing::world {

// True iff the closed segment [a,b] intersects the closed unit square of cell.
bool segment_touches_cell(const Vec2& a, const Vec2& b, const Cell& cell);

// Number of distinct blocked cells the closed segment [a,b] touches.
int walls_between(const MazeMap& map, const Vec2& a, const Vec2& b);

// walls_between == 0, with early exit.
bool line_of_sight(const MazeMap& map, const Vec2& a, const Vec2& b);

// Target visible from `observer`: within `radius`, within `fov_angle_deg`
// total aperture (boundary inclusive), and unobstructed. A target exactly at
// the observer position is visible.
bool in_view_cone(const MazeMap& map, const Pose& observer, double fov_angle_deg,
                  double radius, const Vec2& target);

}  // namespace mazing::world
