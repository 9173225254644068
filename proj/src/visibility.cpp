#include "mazing/visibility.hpp"

#include <algorithm>
#include <cmath>

namespace mazing::world {

// Liang–Barsky slab clip against the closed box [cx,cx+1]x[cy,cy+1].
bool segment_touches_cell(const Vec2& a, const Vec2& b, const Cell& cell) {
    const double lox = cell.cx, hix = cell.cx + 1.0;
    const double loy = cell.cy, hiy = cell.cy + 1.0;
    double t0 = 0.0, t1 = 1.0;
    const double d[2] = {b.x - a.x, b.y - a.y};
    const double p[2] = {a.x, a.y};
    const double lo[2] = {lox, loy}, hi[2] = {hix, hiy};
    for (int k = 0; k < 2; ++k) {
        if (d[k] == 0.0) {
            if (p[k] < lo[k] || p[k] > hi[k]) return false;
        } else {
            double ta = (lo[k] - p[k]) / d[k];
            double tb = (hi[k] - p[k]) / d[k];
            if (ta > tb) std::swap(ta, tb);
            t0 = std::max(t0, ta);
            t1 = std::min(t1, tb);
            if (t0 > t1) return false;
        }
    }
    return true;
}

// Shared scan over the segment's cell bounding box. early_out stops at the
// first blocked touch (for boolean line-of-sight queries).
static int count_blocked_touches(const MazeMap& map, const Vec2& a, const Vec2& b,
                                 bool early_out) {
    int x0 = static_cast<int>(std::floor(std::min(a.x, b.x)));
    int x1 = static_cast<int>(std::floor(std::max(a.x, b.x)));
    int y0 = static_cast<int>(std::floor(std::min(a.y, b.y)));
    int y1 = static_cast<int>(std::floor(std::max(a.y, b.y)));
    // Positions exactly on a cell boundary touch the neighbouring cell too.
    --x0; ++x1; --y0; ++y1;
    x0 = std::max(x0, 0);
    y0 = std::max(y0, 0);
    x1 = std::min(x1, map.width - 1);
    y1 = std::min(y1, map.height - 1);
    int count = 0;
    for (int cy = y0; cy <= y1; ++cy) {
        for (int cx = x0; cx <= x1; ++cx) {
            if (!map.blocked(cx, cy)) continue;
            if (segment_touches_cell(a, b, {cx, cy})) {
                ++count;
                if (early_out) return count;
            }
        }
    }
    return count;
}

int walls_between(const MazeMap& map, const Vec2& a, const Vec2& b) {
    return count_blocked_touches(map, a, b, false);
}

bool line_of_sight(const MazeMap& map, const Vec2& a, const Vec2& b) {
    return count_blocked_touches(map, a, b, true) == 0;
}

bool in_view_cone(const MazeMap& map, const Pose& observer, double fov_angle_deg,
                  double radius, const Vec2& target) {
    Vec2 delta = target - observer.position;
    double dist = delta.norm();
    if (dist > radius) return false;
    if (dist > 0) {
        double bearing = std::atan2(delta.y, delta.x);
        double off = std::fabs(wrap_angle(bearing - observer.heading));
        // Tiny slack keeps the inclusive boundary robust to rounding in the
        // degree->radian conversion.
        if (off > deg2rad(fov_angle_deg) * 0.5 + 1e-9) return false;
    }
    return line_of_sight(map, observer.position, target);
}

}  // namespace mazing::world
