#pragma once
// Player avatar: WASD-style movement with a dash, burst-fire projectiles,
// bomb drops that ignite floor cells, and the scoring rules. Commands come
// from pluggable sources; the scripted bot policies used for headless runs
// live here too and only ever see a fog-of-war observation.

#include <optional>
#include <string>
#include <vector>

#include "mazing/agent.hpp"
#include "mazing/common.hpp"
#include "mazing/maze.hpp"
#include "mazing/rng.hpp"

namespace mazing::player {

struct PlayerConfig {
    double move_speed = 2.5;  // m/s; 1.25x the agent's calm base speed
    double dash_cooldown = 2.0;
    double dash_duration = 0.6;
    double dash_multiplier = 2.0;

    int burst_size = 5;            // projectiles per burst pool
    double shot_interval = 0.12;   // s between shots within a burst
    double burst_recharge = 1.5;   // s to refill an exhausted pool

    double bomb_cooldown = 4.0;
    double bomb_fire_lifetime = 5.0;  // s the spawned fire burns
    double bomb_range = 4.0;          // m; landing clamped to the aim ray

    double projectile_speed = 10.0;     // m/s
    double projectile_damage = 5.0;     // hp per hit
    double projectile_hit_radius = 0.3; // m, segment-to-agent hit distance

    double fire_damage_per_s = 10.0;  // hp/s while standing in a burning cell
    double collision_radius = 0.6;    // m; touching the agent loses the round

    double score_hit = 10.0;
    double score_kill = 100.0;
    double score_loss = 50.0;

    double max_health = 100.0;

    // The player's light: a forward cone plus a short peripheral ring.
    double view_angle = 90.0;       // deg, total aperture
    double view_radius = 8.0;       // m
    double peripheral_radius = 2.0; // m, all-around
};

// One tick of abstracted input. `aim` replaces the mouse position; movement
// is a direction of norm <= 1 (anything longer is normalized down).
struct PlayerCommand {
    Vec2 move_dir{0, 0};
    double aim = 0;  // radians
    bool shoot_held = false;
    bool bomb_pressed = false;
    bool dash_pressed = false;
};

struct Projectile {
    Vec2 position;
    Vec2 velocity;  // m/s
    double damage = 5.0;
};

struct PlayerState {
    Pose pose;                // heading = aim direction (the mouse)
    double move_heading = 0;  // last direction of travel, radians
    double health = 100.0;
    double score = 0.0;

    double dash_cooldown_left = 0;   // s until dash may trigger again
    double dash_active_left = 0;     // s of boosted speed remaining
    double shot_timer = 0;           // s until the next in-burst shot
    int shots_left = 5;              // burst pool, in [0, burst_size]
    double burst_recharge_left = 0;  // s until an empty pool refills
    double bomb_cooldown_left = 0;   // s until the next bomb

    // Cumulative counters of presses arriving while the ability was gated.
    long tries_dash_on_cooldown = 0;
    long tries_shoot_on_cooldown = 0;
    long tries_bomb_on_cooldown = 0;

    // Per-tick mirrors for telemetry; rewritten by every apply_command.
    double last_distance = 0;      // m travelled this tick
    double last_rotation = 0;      // |change of move_heading| this tick, rad
    double last_mouse_movement = 0;  // |change of aim| this tick, rad
    bool shot_fired = false;
    bool shoot_on_cooldown = false;  // held with an empty, recharging pool
    bool dash_pressed_now = false;
    bool dash_on_cooldown = false;  // pressed while the cooldown was running
    bool bomb_dropped = false;
    bool bomb_on_cooldown = false;
};

PlayerState make_player(const PlayerConfig& cfg, const Pose& spawn);

// Entities the command spawned this tick.
struct SpawnedEntities {
    std::vector<Projectile> projectiles;
    std::optional<Cell> bomb_cell;  // where a dropped bomb landed
};

// Advance timers, then apply the command: aim, dash, movement (wall-clipped),
// burst fire, bomb. Presses that arrive while the ability is gated are
// counted, never rejected with an error.
SpawnedEntities apply_command(PlayerState& st, const PlayerCommand& cmd,
                              const world::MazeMap& map, const PlayerConfig& cfg, double dt);

// Landing cell of a bomb thrown from `from` along `aim`: the last open cell
// on the ray before a wall or the range limit.
Cell bomb_landing_cell(const world::MazeMap& map, const Vec2& from, double aim, double range);

struct InteractionEvents {
    int hits = 0;    // projectiles that struck the agent
    int kills = 0;   // agent health reached zero
    int losses = 0;  // collision or player death; both respawn
    bool collided = false;
    double player_fire_damage = 0;
    double agent_fire_damage = 0;
};

// Projectile flight and impacts, fire damage to both occupants, the kill and
// the collision/loss rules with respawns. Scores move by exactly
// score_hit/score_kill/score_loss per event. The agent's frustration
// survives its respawn; health and navigation state do not.
InteractionEvents resolve_interactions(PlayerState& pl, agent::AgentState& ag,
                                       std::vector<Projectile>& projectiles,
                                       const world::FireField& fires, const world::MazeMap& map,
                                       const PlayerConfig& cfg, const agent::AgentConfig& agent_cfg,
                                       double dt);

// What a policy is allowed to know. Fog-of-war: the agent's position is
// zeroed and its distance 0 unless the agent is inside the player's view
// cone or peripheral ring with line of sight.
struct Observation {
    Pose self;
    double health = 0;
    bool agent_visible = false;
    Vec2 agent_position{0, 0};
    double agent_distance = 0;
    bool dash_ready = false;
    bool bomb_ready = false;
    int shots_left = 0;
};

Observation make_observation(const world::MazeMap& map, const PlayerState& pl,
                             const Pose& agent_pose, const PlayerConfig& cfg);

enum class PolicyKind { AGGRESSIVE, KITER, RANDOM };

// Parses "aggressive" / "kiter" / "random" (case-insensitive); throws
// ConfigError otherwise.
PolicyKind parse_policy(const std::string& name);
const char* policy_name(PolicyKind kind);

// Per-policy memory carried across ticks (wander direction and its rearm
// timer); policies themselves are pure in (observation, memory, rng).
struct PolicyState {
    double wander_heading = 0;
    double retarget_left = 0;  // s until the wander heading re-rolls
    bool initialized = false;
};

PlayerCommand scripted_policy(PolicyKind kind, const Observation& obs, PolicyState& mem, Rng& rng,
                              double dt);

}  // namespace mazing::player
