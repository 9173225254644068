#include "mazing/telemetry.hpp"

#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include "mazing/csv.hpp"

namespace mazing::sim {

const char* condition_name(Condition c) {
    switch (c) {
        case Condition::CONTROL: return "CONTROL";
        case Condition::BAND_25_50: return "BAND_25_50";
        case Condition::BAND_50_75: return "BAND_50_75";
        case Condition::BAND_75_100: return "BAND_75_100";
    }
    return "UNKNOWN";
}

Condition parse_condition(const std::string& name) {
    std::string up;
    for (char ch : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
    for (Condition c : kAllConditions)
        if (up == condition_name(c)) return c;
    throw ConfigError("unknown condition: " + name);
}

agent::FrustrationBand band_for(Condition c) {
    switch (c) {
        case Condition::CONTROL: return agent::band_control();
        case Condition::BAND_25_50: return agent::band_25_50();
        case Condition::BAND_50_75: return agent::band_50_75();
        case Condition::BAND_75_100: return agent::band_75_100();
    }
    return agent::band_control();
}

const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names = {
        "Frustration",
        "Rotation Speed",
        "Risk-Taking Factor",
        "Movement Speed",
        "Hearing Radius",
        "Hearing Probability",
        "FoV Radius",
        "FoV Angle",
        "Number of Turns in Search",
        "Search Mode",
        "Seeing Player",
        "Chasing Player",
        "Agent Health",
        "Agent Distance Travelled",
        "Taking Risky Path",
        "Agent Change in Rotation",
        "Player Distance Travelled",
        "Shooting",
        "Pressing Shoot on Cool-down",
        "Mouse Movement",
        "Player Health",
        "Dash Pressed",
        "Dash Mode",
        "Pressing Dash on Cool-down",
        "Player Change in Rotation",
        "Bomb Dropping",
        "Pressing Bomb on Cool-down",
        "Score",
        "Agent Distance From Player",
        "Number of Fires",
    };
    return names;
}

int feature_index(const std::string& name) {
    const auto& names = feature_names();
    for (int i = 0; i < kFeatureCount; ++i)
        if (names[i] == name) return i;
    throw DataError("unknown telemetry feature: " + name);
}

void write_telemetry_csv(std::ostream& os, const std::vector<TelemetryFrame>& frames,
                         const std::string& participant, int session, Condition condition) {
    os << "t,participant,session,condition";
    for (const auto& n : feature_names()) os << ',' << n;
    os << '\n';
    const char* cond = condition_name(condition);
    for (const auto& fr : frames) {
        os << fmt_double_shortest(fr.t) << ',' << participant << ',' << session << ',' << cond;
        for (double v : fr.v) os << ',' << fmt_double_shortest(v);
        os << '\n';
    }
}

void write_events_jsonl(std::ostream& os, const std::vector<Event>& events) {
    for (const auto& e : events) {
        os << "{\"event\":\"" << e.type << "\",\"payload\":" << e.payload << ",\"t\":"
           << fmt_double_shortest(e.t) << "}\n";
    }
}

TelemetryLog read_telemetry_csv(std::istream& is) {
    auto fail = [](long line, const std::string& detail) {
        throw DataError("MALFORMED_ROW: line " + std::to_string(line) + ": " + detail);
    };

    std::string line;
    long line_no = 0;
    if (!std::getline(is, line)) throw DataError("MALFORMED_ROW: line 1: missing header");
    ++line_no;
    {
        std::string expect = "t,participant,session,condition";
        for (const auto& n : feature_names()) expect += "," + n;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line != expect) fail(line_no, "unexpected header");
    }

    TelemetryLog log;
    bool first = true;
    double prev_t = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 4 + static_cast<size_t>(kFeatureCount))
            fail(line_no, "expected " + std::to_string(4 + kFeatureCount) + " fields, got " +
                              std::to_string(fields.size()));
        TelemetryFrame fr;
        long session = 0;
        if (!parse_double(fields[0], fr.t)) fail(line_no, "bad time '" + fields[0] + "'");
        if (fields[1].empty()) fail(line_no, "empty participant");
        if (!parse_long(fields[2], session)) fail(line_no, "bad session '" + fields[2] + "'");
        Condition cond;
        try {
            cond = parse_condition(fields[3]);
        } catch (const ConfigError& e) {
            fail(line_no, e.what());
            throw;  // unreachable
        }
        for (int c = 0; c < kFeatureCount; ++c)
            if (!parse_double(fields[static_cast<size_t>(4 + c)], fr.v[static_cast<size_t>(c)]))
                fail(line_no, "bad value '" + fields[static_cast<size_t>(4 + c)] + "'");
        if (first) {
            log.participant = fields[1];
            log.session = static_cast<int>(session);
            log.condition = cond;
            first = false;
        } else {
            if (fields[1] != log.participant || session != log.session || cond != log.condition)
                fail(line_no, "participant/session/condition changed mid-file");
            if (fr.t <= prev_t)
                throw DataError("NON_MONOTONIC_TIME: line " + std::to_string(line_no) + ": t " +
                                fields[0] + " does not increase");
        }
        prev_t = fr.t;
        log.frames.push_back(fr);
    }
    if (log.frames.empty()) throw DataError("telemetry file contains no frames");
    return log;
}

TelemetryLog load_telemetry_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw DataError("cannot open telemetry file: " + path);
    try {
        return read_telemetry_csv(is);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

}  // namespace mazing::sim
