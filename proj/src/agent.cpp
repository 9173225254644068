#include "mazing/agent.hpp"

#include <algorithm>
#include <cmath>

#include "mazing/visibility.hpp"

namespace mazing::agent {

namespace {

double lerp(double a, double b, double t) { return a + (b - a) * t; }

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

ManifestationParams derive_manifestations(double f, const ManifestationCurves& c) {
    const double t = clamp01(f / 100.0);
    ManifestationParams p;
    p.fov_angle = lerp(c.fov_angle_calm, c.fov_angle_max, t);
    p.fov_radius = lerp(c.fov_radius_calm, c.fov_radius_max, t);
    p.hear_radius = lerp(c.hear_radius_calm, c.hear_radius_max, t);
    p.hear_prob_base = lerp(c.hear_prob_calm, c.hear_prob_max, t);
    p.move_speed = c.base_move_speed * lerp(c.move_mult_calm, c.move_mult_max, t);
    p.rot_speed = c.base_rot_speed * lerp(c.rot_mult_calm, c.rot_mult_max, t);
    p.search_turns = static_cast<int>(std::lround(lerp(c.search_turns_calm, c.search_turns_max, t)));
    p.risk_factor = lerp(c.risk_calm, c.risk_max, t);
    p.jitter = c.jitter_max * t * t;
    return p;
}

double update_frustration(double f, const StimulusSet& s, double dt, const FrustrationConfig& cfg,
                          const FrustrationBand& band) {
    if (band.is_control()) return 0.0;
    double next = f;
    if (s.path_delta > 0) next += cfg.delta_path_longer * dt;
    if (s.path_delta < 0) next += cfg.delta_path_shorter * dt;
    if (s.spotted) next += cfg.delta_spotted;
    if (s.lost_sight) next += cfg.delta_lost_sight;
    next += cfg.delta_hit * s.hits;
    if (s.resting) next += cfg.decay_search * dt;
    return std::clamp(next, band.f_min, band.f_max);
}

AgentState make_agent(const AgentConfig& cfg, const Pose& spawn) {
    AgentState st;
    st.f = cfg.band.f_min;
    st.pose = spawn;
    st.health = cfg.max_health;
    st.current_goal = cell_of(spawn.position);
    st.params = derive_manifestations(st.f, cfg.curves);
    return st;
}

SenseResult sense_player(AgentState& st, const Pose& player_pose, const world::MazeMap& map, Rng& rng,
                         double dt) {
    st.seen_now = st.heard_now = false;
    if (world::in_view_cone(map, st.pose, st.params.fov_angle, st.params.fov_radius,
                            player_pose.position)) {
        st.seen_now = true;
        return SenseResult::SEEN;
    }
    const double dist = distance(st.pose.position, player_pose.position);
    if (dist > st.params.hear_radius) {
        st.hear_charge = 0;
        st.hear_timer = 0;
        return SenseResult::NONE;
    }
    st.hear_charge = std::min(0.5, st.hear_charge + 0.1 * dt);
    st.hear_timer += dt;
    SenseResult result = SenseResult::NONE;
    while (st.hear_timer >= 1.0) {
        st.hear_timer -= 1.0;
        const int walls = world::walls_between(map, st.pose.position, player_pose.position);
        const double p = std::min(
            1.0, (st.params.hear_prob_base + st.hear_charge) * std::pow(0.5, walls));
        if (rng.uniform() < p) result = SenseResult::HEARD;
    }
    if (result == SenseResult::HEARD) st.heard_now = true;
    return result;
}

namespace {

// Follow `plan` into the agent state, tracking route-length change for the
// frustration stimulus (chase only; pass track=false elsewhere).
double adopt_plan(AgentState& st, const world::PathPlan& plan, bool track) {
    double delta = 0;
    const double len = static_cast<double>(plan.steps());
    if (track && st.last_path_len >= 0) delta = len - st.last_path_len;
    st.last_path_len = len;
    st.path = plan.cells;
    st.path_pos = st.path.size() > 1 ? 1 : st.path.size();  // skip the start cell
    st.taking_risky_path = plan.crosses_fire;
    return delta;
}

}  // namespace

DecideOutcome agent_decide(AgentState& st, SenseResult sensed, const world::MazeMap& map,
                           const world::FireField& fires, const Pose& player_pose,
                           const AgentConfig& cfg, double dt, Rng& rng) {
    DecideOutcome out;
    const bool sensed_now = sensed != SenseResult::NONE;

    if (sensed_now) {
        if (st.mode == AgentMode::SEARCH) {
            st.mode = AgentMode::CHASE;
            out.spotted = true;
            st.last_path_len = -1;  // fresh chase: nothing to compare against
        }
        st.time_since_sensed = 0;
    } else if (st.mode == AgentMode::CHASE) {
        st.time_since_sensed += dt;
        if (st.time_since_sensed >= cfg.lose_sight_after) {
            st.mode = AgentMode::SEARCH;
            out.lost_sight = true;
            st.tour.clear();
            st.path.clear();
            st.path_pos = 0;
            st.last_path_len = -1;
            st.taking_risky_path = false;
        }
    }

    const Cell from = cell_of(st.pose.position);

    if (st.mode == AgentMode::CHASE) {
        const Cell goal = cell_of(player_pose.position);
        if (out.spotted || goal != st.current_goal) st.risk_roll = rng.uniform();
        st.current_goal = goal;

        const double eff_risk = st.params.risk_factor * (st.health / cfg.max_health);
        auto safe = world::plan_path(map, fires, from, goal, 0.0);
        if (!safe) return out;  // player cell unreachable: hold position
        bool use_risky = false;
        std::optional<world::PathPlan> risky;
        if (eff_risk > 0) {
            risky = world::plan_path(map, fires, from, goal, eff_risk);
            if (risky && risky->crosses_fire && risky->cells != safe->cells) {
                const double safe_len = static_cast<double>(safe->steps());
                const double risky_len = static_cast<double>(risky->steps());
                use_risky = (risky_len > 0 && safe_len / risky_len > cfg.risky_ratio) ||
                            st.risk_roll < eff_risk;
            }
        }
        out.path_delta = adopt_plan(st, use_risky ? *risky : *safe, true);
        return out;
    }

    // SEARCH: wander a tour of random open cells, re-seeding it when spent.
    const bool route_spent = st.path_pos >= st.path.size();
    if (route_spent) {
        for (int attempt = 0; attempt < 64; ++attempt) {
            if (st.tour.empty()) {
                const auto& cells = map.open_cells();
                const int turns = std::max(1, st.params.search_turns);
                for (int i = 0; i < turns; ++i) {
                    Cell pick = cells[rng.uniform_int(cells.size())];
                    if (pick == from && cells.size() > 1) {
                        pick = cells[rng.uniform_int(cells.size())];
                    }
                    st.tour.push_back(pick);
                }
            }
            const Cell goal = st.tour.front();
            st.tour.erase(st.tour.begin());
            auto plan = world::plan_path(map, fires, from, goal, 0.0);
            if (plan) {
                st.current_goal = goal;
                adopt_plan(st, *plan, false);
                st.taking_risky_path = false;
                break;
            }
        }
    }
    return out;
}

double agent_step(AgentState& st, const world::MazeMap& map, double dt, Rng& rng) {
    st.last_distance = 0;
    st.last_rotation = 0;
    while (st.path_pos < st.path.size() &&
           (cell_of(st.pose.position) == st.path[st.path_pos] ||
            distance(st.pose.position, cell_center(st.path[st.path_pos])) < 0.3)) {
        ++st.path_pos;
    }
    if (st.path_pos >= st.path.size()) return 0.0;

    const Vec2 target = cell_center(st.path[st.path_pos]);
    const Vec2 to_target = target - st.pose.position;
    const double desired = std::atan2(to_target.y, to_target.x);
    const double diff = wrap_angle(desired - st.pose.heading);
    const double max_turn = deg2rad(st.params.rot_speed) * dt;
    const double turn = std::clamp(diff, -max_turn, max_turn);
    const double noise = rng.gaussian(0.0, deg2rad(st.params.jitter) * dt);
    st.last_rotation = turn + noise;
    st.pose.heading = wrap_heading(st.pose.heading + st.last_rotation);

    const Vec2 step{std::cos(st.pose.heading) * st.params.move_speed * dt,
                    std::sin(st.pose.heading) * st.params.move_speed * dt};
    const Vec2 next = world::slide_move(map, st.pose.position, step);
    st.last_distance = distance(next, st.pose.position);
    st.pose.position = next;
    return st.last_distance;
}

}  // namespace mazing::agent
