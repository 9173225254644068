#include "mazing/pathfind.hpp"

#include <algorithm>
#include <queue>

namespace mazing::world {

std::optional<PathPlan> plan_path(const MazeMap& map, const FireField& fires, Cell from,
                                  Cell to, double risk_factor, double fire_penalty) {
    if (map.blocked(from) || map.blocked(to)) return std::nullopt;

    const size_t n = static_cast<size_t>(map.width) * map.height;
    std::vector<double> dist(n, -1.0);
    std::vector<int> prev(n, -1);
    // Per-cell entry surcharge; materialized once so repeated lookups are O(1).
    std::vector<double> surcharge(n, 0.0);
    const double pen = fire_penalty * (1.0 - risk_factor);
    for (const auto& f : fires.fires())
        if (map.in_bounds(f.cell.cx, f.cell.cy))
            surcharge[static_cast<size_t>(map.cell_index(f.cell))] = pen;

    using Node = std::pair<double, int>;  // (cost, cell index) — index breaks ties
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> heap;
    const int start = map.cell_index(from), target = map.cell_index(to);
    dist[static_cast<size_t>(start)] = 0.0;
    heap.push({0.0, start});

    while (!heap.empty()) {
        auto [cost, idx] = heap.top();
        heap.pop();
        if (cost > dist[static_cast<size_t>(idx)]) continue;
        if (idx == target) break;
        const int cx = idx % map.width, cy = idx / map.width;
        const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            const int nx = cx + dx[k], ny = cy + dy[k];
            if (map.blocked(nx, ny)) continue;
            const int nidx = ny * map.width + nx;
            const double ncost = cost + 1.0 + surcharge[static_cast<size_t>(nidx)];
            if (dist[static_cast<size_t>(nidx)] < 0 || ncost < dist[static_cast<size_t>(nidx)]) {
                dist[static_cast<size_t>(nidx)] = ncost;
                prev[static_cast<size_t>(nidx)] = idx;
                heap.push({ncost, nidx});
            }
        }
    }

    if (dist[static_cast<size_t>(target)] < 0) return std::nullopt;

    PathPlan plan;
    plan.cost = dist[static_cast<size_t>(target)];
    for (int at = target; at != -1; at = prev[static_cast<size_t>(at)])
        plan.cells.push_back({at % map.width, at / map.width});
    std::reverse(plan.cells.begin(), plan.cells.end());
    for (size_t i = 1; i < plan.cells.size(); ++i)
        if (fires.burning(plan.cells[i])) plan.crosses_fire = true;
    return plan;
}

}  // namespace mazing::world
