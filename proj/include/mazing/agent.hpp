#pragma once
// The frustration-driven opponent. Frustration f lives in a per-condition
// band and every behavioural parameter of the agent is a deterministic
// function of f; rising frustration narrows and extends vision, sharpens
// hearing, speeds the agent up and makes its movement noisy and risk-seeking.

#include <vector>

#include "mazing/common.hpp"
#include "mazing/maze.hpp"
#include "mazing/pathfind.hpp"
#include "mazing/rng.hpp"

namespace mazing::agent {

struct FrustrationBand {
    double f_min = 0, f_max = 0;
    bool is_control() const { return f_min == 0.0 && f_max == 0.0; }
};

inline FrustrationBand band_control() { return {0, 0}; }
inline FrustrationBand band_25_50() { return {25, 50}; }
inline FrustrationBand band_50_75() { return {50, 75}; }
inline FrustrationBand band_75_100() { return {75, 100}; }

// Stimulus weights, in frustration units. Rate-based entries (per second)
// are integrated over dt; the rest fire once per event.
struct FrustrationConfig {
    double delta_path_longer = 2.0;    // per second while the route keeps growing
    double delta_path_shorter = -0.5;  // per second while it shrinks (mild relief)
    double delta_spotted = 1.0;        // acquiring the player (light)
    double delta_lost_sight = 5.0;     // losing an active chase
    double delta_hit = 4.0;            // per projectile hit
    double decay_search = -1.0;        // per second of undisturbed searching
};

// Endpoint curves mapping f in [0,100] onto behaviour parameters. "calm" is
// the f=0 endpoint, "max" the f=100 endpoint; interpolation is linear except
// for jitter, which grows quadratically.
struct ManifestationCurves {
    double fov_angle_calm = 135.0, fov_angle_max = 45.0;  // degrees
    double fov_radius_calm = 10.0, fov_radius_max = 15.0;  // metres
    double hear_radius_calm = 10.0, hear_radius_max = 6.0;
    double hear_prob_calm = 0.1, hear_prob_max = 0.5;  // per one-second check
    double move_mult_calm = 1.0, move_mult_max = 1.6;  // x base_move_speed
    double rot_mult_calm = 1.0, rot_mult_max = 1.8;    // x base_rot_speed
    double search_turns_calm = 6.0, search_turns_max = 2.0;
    double risk_calm = 0.0, risk_max = 1.0;
    double jitter_max = 90.0;       // deg/s heading noise at f=100
    double base_move_speed = 2.0;   // m/s
    double base_rot_speed = 180.0;  // deg/s
};

struct ManifestationParams {
    double fov_angle = 135.0;
    double fov_radius = 10.0;
    double hear_radius = 10.0;
    double hear_prob_base = 0.1;
    double move_speed = 2.0;
    double rot_speed = 180.0;
    int search_turns = 6;
    double risk_factor = 0.0;
    double jitter = 0.0;  // deg/s
};

// Linear (jitter: quadratic) interpolation at frustration f in [0,100].
ManifestationParams derive_manifestations(double f, const ManifestationCurves& curves);

struct StimulusSet {
    double path_delta = 0;  // replanned route length minus the previous one (cells)
    bool spotted = false;
    bool lost_sight = false;
    int hits = 0;
    bool resting = false;
};

// Clamped accumulation of stimuli; the control band pins f to 0 regardless.
double update_frustration(double f, const StimulusSet& stimuli, double dt,
                          const FrustrationConfig& cfg, const FrustrationBand& band);

enum class SenseResult { NONE, SEEN, HEARD };
enum class AgentMode { SEARCH, CHASE };

struct AgentConfig {
    FrustrationConfig frustration;
    ManifestationCurves curves;
    FrustrationBand band;
    double max_health = 200.0;
    double lose_sight_after = 3.0;  // seconds without sensing before a chase ends
    double risky_ratio = 1.5;       // safe/risky length ratio that forces the risky route
};

struct AgentState {
    double f = 0;
    Pose pose;
    double health = 200.0;
    AgentMode mode = AgentMode::SEARCH;
    Cell current_goal{0, 0};
    double last_path_len = -1;  // cells; <0 means no previous plan to compare
    double hear_charge = 0;     // auditory accumulator, in [0, 0.5]
    double hear_timer = 0;      // seconds since the last auditory check
    double time_since_sensed = 0;
    double risk_roll = 1.0;  // latent riskiness draw for the current goal
    std::vector<Cell> tour;  // remaining search waypoints (front = next)
    std::vector<Cell> path;  // current route, cell centres; path_pos = next index
    size_t path_pos = 0;
    bool taking_risky_path = false;
    bool seen_now = false, heard_now = false;
    double last_distance = 0;  // realized displacement last step (m)
    double last_rotation = 0;  // realized heading change last step (rad, signed)
    ManifestationParams params;
};

AgentState make_agent(const AgentConfig& cfg, const Pose& spawn);

// Vision first (deterministic), then the per-second auditory check with its
// charge accumulator; walls halve the auditory chance per blocked cell.
SenseResult sense_player(AgentState& st, const Pose& player_pose, const world::MazeMap& map, Rng& rng,
                         double dt);

struct DecideOutcome {
    bool spotted = false;     // transitioned into a chase this tick
    bool lost_sight = false;  // chase timed out this tick
    double path_delta = 0;    // chase route length change (cells)
};

// Mode transitions, route planning and the risky-path choice.
DecideOutcome agent_decide(AgentState& st, SenseResult sensed, const world::MazeMap& map,
                           const world::FireField& fires, const Pose& player_pose,
                           const AgentConfig& cfg, double dt, Rng& rng);

// Advance along the current route: bounded turn toward the next waypoint,
// Gaussian heading jitter, wall-clipped translation. Returns displacement.
double agent_step(AgentState& st, const world::MazeMap& map, double dt, Rng& rng);

}  // namespace mazing::agent
