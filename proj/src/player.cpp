#include "mazing/player.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "mazing/visibility.hpp"

namespace mazing::player {

namespace {

// Countdown step that snaps near-zero residue to exactly zero, so gates
// timed in whole ticks open on the right tick despite 1/30 not being
// representable in binary.
double tick_down(double t, double dt) {
    t -= dt;
    return t < 1e-9 ? 0.0 : t;
}

}  // namespace

PlayerState make_player(const PlayerConfig& cfg, const Pose& spawn) {
    PlayerState st;
    st.pose = spawn;
    st.move_heading = spawn.heading;
    st.health = cfg.max_health;
    st.shots_left = cfg.burst_size;
    return st;
}

Cell bomb_landing_cell(const world::MazeMap& map, const Vec2& from, double aim, double range) {
    const Vec2 dir{std::cos(aim), std::sin(aim)};
    Cell landing = cell_of(from);
    constexpr double kStep = 0.05;
    for (double t = kStep; t <= range; t += kStep) {
        const Cell c = cell_of(from + dir * t);
        if (map.blocked(c)) break;
        landing = c;
    }
    return landing;
}

SpawnedEntities apply_command(PlayerState& st, const PlayerCommand& cmd,
                              const world::MazeMap& map, const PlayerConfig& cfg, double dt) {
    SpawnedEntities out;

    st.dash_cooldown_left = tick_down(st.dash_cooldown_left, dt);
    st.dash_active_left = tick_down(st.dash_active_left, dt);
    st.shot_timer = tick_down(st.shot_timer, dt);
    st.bomb_cooldown_left = tick_down(st.bomb_cooldown_left, dt);
    if (st.shots_left == 0) {
        st.burst_recharge_left = tick_down(st.burst_recharge_left, dt);
        if (st.burst_recharge_left == 0) st.shots_left = cfg.burst_size;
    }

    st.last_distance = 0;
    st.last_rotation = 0;
    st.shot_fired = false;
    st.shoot_on_cooldown = false;
    st.dash_on_cooldown = false;
    st.bomb_dropped = false;
    st.bomb_on_cooldown = false;
    st.dash_pressed_now = cmd.dash_pressed;

    st.last_mouse_movement = std::fabs(wrap_angle(cmd.aim - st.pose.heading));
    st.pose.heading = wrap_heading(cmd.aim);

    if (cmd.dash_pressed) {
        if (st.dash_cooldown_left > 0) {
            st.dash_on_cooldown = true;
            ++st.tries_dash_on_cooldown;
        } else {
            st.dash_active_left = cfg.dash_duration;
            st.dash_cooldown_left = cfg.dash_cooldown;
        }
    }

    Vec2 dir = cmd.move_dir;
    const double mag = dir.norm();
    if (mag > 1.0) dir = dir * (1.0 / mag);
    if (mag > 0) {
        const double speed =
            cfg.move_speed * (st.dash_active_left > 0 ? cfg.dash_multiplier : 1.0);
        const Vec2 next = world::slide_move(map, st.pose.position, dir * (speed * dt));
        st.last_distance = distance(next, st.pose.position);
        st.pose.position = next;
        const double h = std::atan2(dir.y, dir.x);
        st.last_rotation = std::fabs(wrap_angle(h - st.move_heading));
        st.move_heading = wrap_heading(h);
    }

    if (cmd.shoot_held) {
        if (st.shots_left == 0) {
            st.shoot_on_cooldown = true;
            ++st.tries_shoot_on_cooldown;
        } else if (st.shot_timer <= 0) {
            const Vec2 vel{std::cos(st.pose.heading) * cfg.projectile_speed,
                           std::sin(st.pose.heading) * cfg.projectile_speed};
            out.projectiles.push_back({st.pose.position, vel, cfg.projectile_damage});
            st.shot_fired = true;
            st.shot_timer = cfg.shot_interval;
            if (--st.shots_left == 0) st.burst_recharge_left = cfg.burst_recharge;
        }
    }

    if (cmd.bomb_pressed) {
        if (st.bomb_cooldown_left > 0) {
            st.bomb_on_cooldown = true;
            ++st.tries_bomb_on_cooldown;
        } else {
            out.bomb_cell =
                bomb_landing_cell(map, st.pose.position, st.pose.heading, cfg.bomb_range);
            st.bomb_dropped = true;
            st.bomb_cooldown_left = cfg.bomb_cooldown;
        }
    }

    return out;
}

namespace {

void respawn_player(PlayerState& pl, const world::MazeMap& map, const PlayerConfig& cfg) {
    pl.pose.position = cell_center(map.player_spawn);
    pl.pose.heading = 0;
    pl.move_heading = 0;
    pl.health = cfg.max_health;
}

// Fresh agent at its spawn; only the frustration level carries over.
void respawn_agent(agent::AgentState& ag, const world::MazeMap& map,
                   const agent::AgentConfig& agent_cfg) {
    const double f = ag.f;
    ag = agent::make_agent(agent_cfg, Pose{cell_center(map.agent_spawn), 0.0});
    ag.f = f;
    ag.params = agent::derive_manifestations(f, agent_cfg.curves);
}

}  // namespace

InteractionEvents resolve_interactions(PlayerState& pl, agent::AgentState& ag,
                                       std::vector<Projectile>& projectiles,
                                       const world::FireField& fires, const world::MazeMap& map,
                                       const PlayerConfig& cfg, const agent::AgentConfig& agent_cfg,
                                       double dt) {
    InteractionEvents ev;

    for (auto it = projectiles.begin(); it != projectiles.end();) {
        const Vec2 a = it->position;
        const Vec2 b = a + it->velocity * dt;
        const Vec2 ab = b - a;
        const double len2 = ab.dot(ab);
        const double t =
            len2 > 0 ? std::clamp((ag.pose.position - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
        const Vec2 closest = a + ab * t;
        // A hit needs both proximity along this tick's flight segment and an
        // unobstructed path up to the point of closest approach.
        const bool hit = distance(closest, ag.pose.position) <= cfg.projectile_hit_radius &&
                         world::line_of_sight(map, a, closest);
        if (hit) {
            ag.health -= it->damage;
            pl.score += cfg.score_hit;
            ++ev.hits;
            it = projectiles.erase(it);
        } else if (world::walls_between(map, a, b) > 0) {
            it = projectiles.erase(it);
        } else {
            it->position = b;
            ++it;
        }
    }

    if (fires.burning(cell_of(pl.pose.position))) {
        const double d = cfg.fire_damage_per_s * dt;
        pl.health -= d;
        ev.player_fire_damage = d;
    }
    if (fires.burning(cell_of(ag.pose.position))) {
        const double d = cfg.fire_damage_per_s * dt;
        ag.health -= d;
        ev.agent_fire_damage = d;
    }

    if (ag.health <= 0) {
        ++ev.kills;
        pl.score += cfg.score_kill;
        respawn_agent(ag, map, agent_cfg);
    }

    ev.collided = distance(pl.pose.position, ag.pose.position) <= cfg.collision_radius;
    if (ev.collided || pl.health <= 0) {
        ++ev.losses;
        pl.score -= cfg.score_loss;
        respawn_player(pl, map, cfg);
        respawn_agent(ag, map, agent_cfg);
    }

    return ev;
}

Observation make_observation(const world::MazeMap& map, const PlayerState& pl,
                             const Pose& agent_pose, const PlayerConfig& cfg) {
    Observation obs;
    obs.self = pl.pose;
    obs.health = pl.health;
    obs.dash_ready = pl.dash_cooldown_left <= 0;
    obs.bomb_ready = pl.bomb_cooldown_left <= 0;
    obs.shots_left = pl.shots_left;

    const bool in_cone = world::in_view_cone(map, pl.pose, cfg.view_angle, cfg.view_radius,
                                             agent_pose.position);
    const bool peripheral =
        distance(pl.pose.position, agent_pose.position) <= cfg.peripheral_radius &&
        world::line_of_sight(map, pl.pose.position, agent_pose.position);
    if (in_cone || peripheral) {
        obs.agent_visible = true;
        obs.agent_position = agent_pose.position;
        obs.agent_distance = distance(pl.pose.position, agent_pose.position);
    }
    return obs;
}

PolicyKind parse_policy(const std::string& name) {
    std::string low;
    for (char c : name) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (low == "aggressive") return PolicyKind::AGGRESSIVE;
    if (low == "kiter") return PolicyKind::KITER;
    if (low == "random") return PolicyKind::RANDOM;
    throw ConfigError("unknown policy: " + name);
}

const char* policy_name(PolicyKind kind) {
    switch (kind) {
        case PolicyKind::AGGRESSIVE: return "aggressive";
        case PolicyKind::KITER: return "kiter";
        case PolicyKind::RANDOM: return "random";
    }
    return "unknown";
}

namespace {

constexpr double kKiterStandoff = 5.0;     // m; retreat when the agent is closer
constexpr double kKiterDashRadius = 3.0;   // m; dash away inside this
constexpr double kKiterBombRange = 6.0;    // m; bomb the agent's area inside this
constexpr double kAggroDashRange = 3.0;    // m; dash to close beyond this
constexpr double kAggroStandoff = 1.5;     // m; stop closing here (touching = losing)

// Shared roaming behaviour while the agent is hidden: hold a heading for a
// short random time, then re-roll.
PlayerCommand wander(PolicyState& mem, Rng& rng, double dt) {
    mem.retarget_left -= dt;
    if (!mem.initialized || mem.retarget_left <= 0) {
        mem.wander_heading = rng.uniform() * 2.0 * kPi;
        mem.retarget_left = 1.0 + rng.uniform() * 1.5;
        mem.initialized = true;
    }
    PlayerCommand cmd;
    cmd.move_dir = {std::cos(mem.wander_heading), std::sin(mem.wander_heading)};
    cmd.aim = mem.wander_heading;
    return cmd;
}

double aim_at(const Observation& obs) {
    const Vec2 to = obs.agent_position - obs.self.position;
    return std::atan2(to.y, to.x);
}

}  // namespace

PlayerCommand scripted_policy(PolicyKind kind, const Observation& obs, PolicyState& mem, Rng& rng,
                              double dt) {
    switch (kind) {
        case PolicyKind::RANDOM: {
            // Fixed draw order keeps the stream reproducible: move angle,
            // move magnitude, aim, shoot, bomb, dash.
            PlayerCommand cmd;
            const double ang = rng.uniform() * 2.0 * kPi;
            const double mag = rng.uniform();
            cmd.move_dir = {std::cos(ang) * mag, std::sin(ang) * mag};
            cmd.aim = rng.uniform() * 2.0 * kPi;
            cmd.shoot_held = rng.uniform() < 0.5;
            cmd.bomb_pressed = rng.uniform() < 0.5;
            cmd.dash_pressed = rng.uniform() < 0.5;
            return cmd;
        }
        case PolicyKind::AGGRESSIVE: {
            if (!obs.agent_visible) return wander(mem, rng, dt);
            PlayerCommand cmd;
            cmd.aim = aim_at(obs);
            if (obs.agent_distance > kAggroStandoff)
                cmd.move_dir = {std::cos(cmd.aim), std::sin(cmd.aim)};
            cmd.shoot_held = true;
            cmd.dash_pressed = obs.dash_ready && obs.agent_distance > kAggroDashRange;
            mem.retarget_left = 0;  // re-roll the wander heading once contact is lost
            return cmd;
        }
        case PolicyKind::KITER: {
            if (!obs.agent_visible) return wander(mem, rng, dt);
            PlayerCommand cmd;
            cmd.aim = aim_at(obs);
            cmd.shoot_held = true;
            cmd.bomb_pressed = obs.bomb_ready && obs.agent_distance <= kKiterBombRange;
            cmd.dash_pressed = obs.dash_ready && obs.agent_distance <= kKiterDashRadius;
            if (obs.agent_distance < kKiterStandoff) {
                cmd.move_dir = {-std::cos(cmd.aim), -std::sin(cmd.aim)};
            }
            mem.retarget_left = 0;
            return cmd;
        }
    }
    return {};
}

}  // namespace mazing::player
