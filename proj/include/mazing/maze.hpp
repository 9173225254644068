#pragma once
// Grid maze world: rectangular wall grid with one player spawn and one agent
// spawn, plus the transient fire hazards dropped by the player's bombs.
//
// Map text format, one row per line:
//   '#' wall   '.' open   'P' player spawn   'A' agent spawn
// The border must be fully walled and both spawns mutually reachable.

#include <string>
#include <vector>

#include "mazing/common.hpp"

namespace mazing::world {

class MazeMap {
public:
    int width = 0, height = 0;
    Cell player_spawn, agent_spawn;
    double cell_size = 1.0;  // metres; fixed at 1 throughout

    bool in_bounds(int cx, int cy) const {
        return cx >= 0 && cy >= 0 && cx < width && cy < height;
    }
    // Out-of-bounds counts as blocked: the world ends at the walls.
    bool blocked(int cx, int cy) const {
        return !in_bounds(cx, cy) || blocked_[static_cast<size_t>(cy) * width + cx];
    }
    bool blocked(const Cell& c) const { return blocked(c.cx, c.cy); }
    bool open(const Cell& c) const { return !blocked(c); }

    int cell_index(const Cell& c) const { return c.cy * width + c.cx; }

    std::vector<Cell> open_cells() const;
    std::string serialize() const;

    friend MazeMap parse_maze(const std::string& text);

private:
    std::vector<uint8_t> blocked_;
};

// Throws DataError on malformed maps (bad chars, ragged rows, open border,
// missing/duplicate spawns, spawns not mutually reachable).
MazeMap parse_maze(const std::string& text);
MazeMap load_maze(const std::string& path);

// The default 16x16 arena compiled into the binary; data/default.map holds
// the same bytes for reference and external tools.
const std::string& default_map_text();

// Active bomb fires. Fires do not block movement, they only damage occupants
// and repel path planning.
class FireField {
public:
    struct Fire {
        Cell cell;
        double remaining;  // seconds; spawned in (0, 5]
    };

    void ignite(const Cell& c, double lifetime) { fires_.push_back({c, lifetime}); }

    // Advance timers, dropping expired fires. Order-preserving. The epsilon
    // absorbs accumulated rounding so a 5 s fire ticked at 1/30 s burns for
    // exactly 150 ticks, not 151.
    void tick(double dt) {
        size_t w = 0;
        for (size_t i = 0; i < fires_.size(); ++i) {
            fires_[i].remaining -= dt;
            if (fires_[i].remaining > 1e-9) fires_[w++] = fires_[i];
        }
        fires_.resize(w);
    }

    bool burning(const Cell& c) const {
        for (const auto& f : fires_)
            if (f.cell == c) return true;
        return false;
    }

    size_t count() const { return fires_.size(); }
    bool empty() const { return fires_.empty(); }
    const std::vector<Fire>& fires() const { return fires_; }

private:
    std::vector<Fire> fires_;
};

// Axis-separated translation with wall probes; keeps the point out of
// blocked cells while letting it slide along walls. `margin` is the probe
// clearance kept between the point and any wall face it moves toward.
Vec2 slide_move(const MazeMap& map, Vec2 pos, const Vec2& delta, double margin = 0.2);

}  // namespace mazing::world
