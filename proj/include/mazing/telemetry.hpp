#pragma once
// Per-tick telemetry vocabulary: the 30 gameplay features by exact name, the
// experimental conditions, and the writers for the telemetry CSV and the
// line-delimited event log.

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "mazing/agent.hpp"
#include "mazing/common.hpp"

namespace mazing::sim {

// Frustration regime a session runs under. CONTROL pins frustration to zero;
// the band conditions clamp it to the named range.
enum class Condition { CONTROL, BAND_25_50, BAND_50_75, BAND_75_100 };

inline constexpr std::array<Condition, 4> kAllConditions{
    Condition::CONTROL, Condition::BAND_25_50, Condition::BAND_50_75, Condition::BAND_75_100};

const char* condition_name(Condition c);
Condition parse_condition(const std::string& name);  // case-insensitive; throws ConfigError
agent::FrustrationBand band_for(Condition c);

inline constexpr int kFeatureCount = 30;

// Column indices into TelemetryFrame::v, grouped as: agent internals,
// agent behaviour, player behaviour, gameplay context.
namespace feat {
inline constexpr int kFrustration = 0;
inline constexpr int kRotationSpeed = 1;
inline constexpr int kRiskFactor = 2;
inline constexpr int kMovementSpeed = 3;
inline constexpr int kHearingRadius = 4;
inline constexpr int kHearingProbability = 5;
inline constexpr int kFovRadius = 6;
inline constexpr int kFovAngle = 7;
inline constexpr int kSearchTurns = 8;
inline constexpr int kSearchMode = 9;
inline constexpr int kSeeingPlayer = 10;
inline constexpr int kChasingPlayer = 11;
inline constexpr int kAgentHealth = 12;
inline constexpr int kAgentDistance = 13;
inline constexpr int kTakingRiskyPath = 14;
inline constexpr int kAgentRotation = 15;
inline constexpr int kPlayerDistance = 16;
inline constexpr int kShooting = 17;
inline constexpr int kShootOnCooldown = 18;
inline constexpr int kMouseMovement = 19;
inline constexpr int kPlayerHealth = 20;
inline constexpr int kDashPressed = 21;
inline constexpr int kDashMode = 22;
inline constexpr int kDashOnCooldown = 23;
inline constexpr int kPlayerRotation = 24;
inline constexpr int kBombDropping = 25;
inline constexpr int kBombOnCooldown = 26;
inline constexpr int kScore = 27;
inline constexpr int kAgentDistanceFromPlayer = 28;
inline constexpr int kNumberOfFires = 29;
}  // namespace feat

// The 30 feature names. The three that exist for both sides (Health,
// Distance Travelled, Change in Rotation) carry an Agent/Player prefix so
// every column name is unique.
const std::array<std::string, kFeatureCount>& feature_names();

// Index of `name` in feature_names(); throws DataError on unknown names.
int feature_index(const std::string& name);

struct TelemetryFrame {
    double t = 0;  // seconds since session start
    std::array<double, kFeatureCount> v{};
};

// One structured event-log record; payload is a compact JSON object.
struct Event {
    double t = 0;
    std::string type;
    std::string payload;
};

// CSV with header t,participant,session,condition,<30 feature names>.
// Numbers are written as the shortest strings that parse back bit-exactly.
void write_telemetry_csv(std::ostream& os, const std::vector<TelemetryFrame>& frames,
                         const std::string& participant, int session, Condition condition);

// One JSON object per line: {"event":...,"payload":{...},"t":...}.
void write_events_jsonl(std::ostream& os, const std::vector<Event>& events);

// Strict reader for the telemetry CSV. Participant, session, and condition
// must be uniform across rows, t strictly increasing, and at least one frame
// present; violations throw DataError naming the line.
struct TelemetryLog {
    std::vector<TelemetryFrame> frames;
    std::string participant;
    int session = 1;
    Condition condition = Condition::CONTROL;
};
TelemetryLog read_telemetry_csv(std::istream& is);
TelemetryLog load_telemetry_csv(const std::string& path);

}  // namespace mazing::sim
