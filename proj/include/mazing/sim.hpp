#pragma once
// Deterministic fixed-timestep session engine and the multi-participant
// study runner. One session = one player policy against the frustration
// agent on one map for a fixed duration, emitting a telemetry frame per tick
// and a structured event log.

#include <cstdint>
#include <string>
#include <vector>

#include "mazing/agent.hpp"
#include "mazing/player.hpp"
#include "mazing/telemetry.hpp"

namespace mazing::sim {

struct SessionConfig {
    Condition condition = Condition::CONTROL;
    uint64_t seed = 1;
    double duration = 60.0;   // seconds
    double tick_rate = 30.0;  // Hz; must be >= 10
    player::PolicyKind policy = player::PolicyKind::AGGRESSIVE;
    std::string map_text;  // maze text; empty selects the built-in arena
    player::PlayerConfig player;
    agent::AgentConfig agent;  // its band is overridden by `condition`
};

struct SessionResult {
    std::vector<TelemetryFrame> frames;
    std::vector<Event> events;
    long hits = 0, kills = 0, losses = 0;  // event totals, for reconciliation
    double final_score = 0;
};

// Runs duration*tick_rate ticks in the fixed order: policy -> player update
// -> agent sense/decide/step -> interactions -> frustration update -> emit.
// Identical configs produce bitwise-identical results. Throws ConfigError on
// invalid duration/tick_rate, DataError on a malformed map.
SessionResult run_session(const SessionConfig& cfg);

struct StudyConfig {
    int participants = 20;
    int sessions_per = 4;
    uint64_t base_seed = 1;
    SessionConfig base;       // template; condition/seed/policy set per session
    bool vary_policy = true;  // cycle bot policies across participants
};

struct SessionRecord {
    std::string participant;  // "P01", "P02", ...
    int session = 1;          // 1-based
    Condition condition = Condition::CONTROL;
    uint64_t seed = 0;
    player::PolicyKind policy = player::PolicyKind::AGGRESSIVE;
    SessionResult result;
};

struct StudyBundle {
    std::vector<SessionRecord> sessions;  // participant-major, session order
};

// participants x sessions_per sessions with the condition order
// counterbalanced by a cyclic Latin square over the four conditions, so each
// participant meets each condition exactly once when sessions_per == 4.
// Session seeds derive from base_seed and the participant/session indices.
StudyBundle run_study(const StudyConfig& cfg);

// 1-based display id: participant_id(1) == "P01".
std::string participant_id(int index);

}  // namespace mazing::sim
