#include "mazing/sim.hpp"

#include <cmath>
#include <cstdio>

#include "mazing/csv.hpp"
#include "mazing/maze.hpp"
#include "mazing/rng.hpp"

namespace mazing::sim {

namespace {

void validate(const SessionConfig& cfg) {
    if (!(cfg.duration > 0)) throw ConfigError("session duration must be positive");
    if (!(cfg.tick_rate >= 10)) throw ConfigError("tick rate must be at least 10 Hz");
}

std::string cell_payload(const Cell& c) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "{\"cell\":[%d,%d]}", c.cx, c.cy);
    return buf;
}

}  // namespace

SessionResult run_session(const SessionConfig& cfg) {
    validate(cfg);
    const world::MazeMap map =
        world::parse_maze(cfg.map_text.empty() ? world::default_map_text() : cfg.map_text);

    agent::AgentConfig acfg = cfg.agent;
    acfg.band = band_for(cfg.condition);

    const double dt = 1.0 / cfg.tick_rate;
    const long ticks = std::lround(cfg.duration * cfg.tick_rate);

    Rng rng(cfg.seed);
    player::PlayerState pl = player::make_player(cfg.player, Pose{cell_center(map.player_spawn), 0});
    agent::AgentState ag = agent::make_agent(acfg, Pose{cell_center(map.agent_spawn), 0});
    world::FireField fires;
    std::vector<player::Projectile> projectiles;
    player::PolicyState mem;

    SessionResult res;
    res.frames.reserve(static_cast<size_t>(ticks));

    for (long k = 0; k < ticks; ++k) {
        const double t = k * dt;

        const auto obs = player::make_observation(map, pl, ag.pose, cfg.player);
        const auto cmd = player::scripted_policy(cfg.policy, obs, mem, rng, dt);

        const auto spawned = player::apply_command(pl, cmd, map, cfg.player, dt);
        for (const auto& p : spawned.projectiles) projectiles.push_back(p);
        if (spawned.bomb_cell) {
            fires.ignite(*spawned.bomb_cell, cfg.player.bomb_fire_lifetime);
            res.events.push_back({t, "bomb", cell_payload(*spawned.bomb_cell)});
        }

        const auto sensed = agent::sense_player(ag, pl.pose, map, rng, dt);
        const auto decide = agent::agent_decide(ag, sensed, map, fires, pl.pose, acfg, dt, rng);
        agent::agent_step(ag, map, dt, rng);
        if (decide.spotted) res.events.push_back({t, "spotted", "{}"});
        if (decide.lost_sight) res.events.push_back({t, "lost_sight", "{}"});

        const auto ev =
            player::resolve_interactions(pl, ag, projectiles, fires, map, cfg.player, acfg, dt);
        res.hits += ev.hits;
        res.kills += ev.kills;
        res.losses += ev.losses;
        for (int i = 0; i < ev.hits; ++i)
            res.events.push_back(
                {t, "hit", "{\"damage\":" + fmt_double_shortest(cfg.player.projectile_damage) + "}"});
        for (int i = 0; i < ev.kills; ++i) res.events.push_back({t, "kill", "{}"});
        for (int i = 0; i < ev.losses; ++i)
            res.events.push_back(
                {t, "loss", std::string("{\"collided\":") + (ev.collided ? "true" : "false") + "}"});

        agent::StimulusSet stim;
        stim.path_delta = decide.path_delta;
        stim.spotted = decide.spotted;
        stim.lost_sight = decide.lost_sight;
        stim.hits = ev.hits;
        stim.resting = ag.mode == agent::AgentMode::SEARCH;
        ag.f = agent::update_frustration(ag.f, stim, dt, acfg.frustration, acfg.band);
        ag.params = agent::derive_manifestations(ag.f, acfg.curves);

        TelemetryFrame fr;
        fr.t = t;
        fr.v[feat::kFrustration] = ag.f;
        fr.v[feat::kRotationSpeed] = ag.params.rot_speed;
        fr.v[feat::kRiskFactor] = ag.params.risk_factor;
        fr.v[feat::kMovementSpeed] = ag.params.move_speed;
        fr.v[feat::kHearingRadius] = ag.params.hear_radius;
        fr.v[feat::kHearingProbability] = std::min(1.0, ag.params.hear_prob_base + ag.hear_charge);
        fr.v[feat::kFovRadius] = ag.params.fov_radius;
        fr.v[feat::kFovAngle] = ag.params.fov_angle;
        fr.v[feat::kSearchTurns] = ag.params.search_turns;
        fr.v[feat::kSearchMode] = ag.mode == agent::AgentMode::SEARCH ? 1 : 0;
        fr.v[feat::kSeeingPlayer] = ag.seen_now ? 1 : 0;
        fr.v[feat::kChasingPlayer] = ag.mode == agent::AgentMode::CHASE ? 1 : 0;
        fr.v[feat::kAgentHealth] = ag.health;
        fr.v[feat::kAgentDistance] = ag.last_distance;
        fr.v[feat::kTakingRiskyPath] = ag.taking_risky_path ? 1 : 0;
        fr.v[feat::kAgentRotation] = rad2deg(std::fabs(ag.last_rotation));
        fr.v[feat::kPlayerDistance] = pl.last_distance;
        fr.v[feat::kShooting] = pl.shot_fired ? 1 : 0;
        fr.v[feat::kShootOnCooldown] = pl.shoot_on_cooldown ? 1 : 0;
        fr.v[feat::kMouseMovement] = rad2deg(pl.last_mouse_movement);
        fr.v[feat::kPlayerHealth] = pl.health;
        fr.v[feat::kDashPressed] = pl.dash_pressed_now ? 1 : 0;
        fr.v[feat::kDashMode] = pl.dash_active_left > 0 ? 1 : 0;
        fr.v[feat::kDashOnCooldown] = pl.dash_on_cooldown ? 1 : 0;
        fr.v[feat::kPlayerRotation] = rad2deg(pl.last_rotation);
        fr.v[feat::kBombDropping] = pl.bomb_dropped ? 1 : 0;
        fr.v[feat::kBombOnCooldown] = pl.bomb_on_cooldown ? 1 : 0;
        fr.v[feat::kScore] = pl.score;
        fr.v[feat::kAgentDistanceFromPlayer] = distance(ag.pose.position, pl.pose.position);
        fr.v[feat::kNumberOfFires] = static_cast<double>(fires.count());
        res.frames.push_back(fr);

        fires.tick(dt);
    }

    res.final_score = pl.score;
    return res;
}

std::string participant_id(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "P%02d", index);
    return buf;
}

StudyBundle run_study(const StudyConfig& cfg) {
    if (cfg.participants < 2) throw ConfigError("a study needs at least 2 participants");
    if (cfg.sessions_per < 1) throw ConfigError("sessions per participant must be positive");

    constexpr player::PolicyKind kPolicyCycle[] = {
        player::PolicyKind::AGGRESSIVE, player::PolicyKind::KITER, player::PolicyKind::RANDOM};

    StudyBundle bundle;
    bundle.sessions.reserve(static_cast<size_t>(cfg.participants) * cfg.sessions_per);
    for (int p = 0; p < cfg.participants; ++p) {
        for (int s = 0; s < cfg.sessions_per; ++s) {
            SessionConfig sc = cfg.base;
            // Cyclic Latin square: row = participant, column = session.
            sc.condition = kAllConditions[static_cast<size_t>((p + s) % 4)];
            sc.seed = derive_seed(cfg.base_seed, static_cast<uint64_t>(p),
                                  static_cast<uint64_t>(s), 1);
            if (cfg.vary_policy) sc.policy = kPolicyCycle[p % 3];

            SessionRecord rec;
            rec.participant = participant_id(p + 1);
            rec.session = s + 1;
            rec.condition = sc.condition;
            rec.seed = sc.seed;
            rec.policy = sc.policy;
            rec.result = run_session(sc);
            bundle.sessions.push_back(std::move(rec));
        }
    }
    return bundle;
}

}  // namespace mazing::sim
