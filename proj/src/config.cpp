#include "mazing/config.hpp"

#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mazing/csv.hpp"
#include "mazing/telemetry.hpp"

namespace mazing::config {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void bad(long line, const std::string& detail) {
    throw ConfigError("config: line " + std::to_string(line) + ": " + detail);
}

double want_double(const std::string& key, const std::string& value, long line) {
    double v;
    if (!parse_double(value, v)) bad(line, "key '" + key + "' needs a number, got '" + value + "'");
    return v;
}

long want_long(const std::string& key, const std::string& value, long line) {
    long v;
    if (!parse_long(value, v)) bad(line, "key '" + key + "' needs an integer, got '" + value + "'");
    return v;
}

uint64_t want_seed(const std::string& key, const std::string& value, long line) {
    if (value.empty()) bad(line, "key '" + key + "' needs an unsigned integer");
    char* end = nullptr;
    const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
    if (end != value.c_str() + value.size() || value[0] == '-')
        bad(line, "key '" + key + "' needs an unsigned integer, got '" + value + "'");
    return static_cast<uint64_t>(v);
}

}  // namespace

StudySettings defaults() {
    StudySettings s;
    s.annotator.cue_weights = {{"Score", 1.0}, {"Chasing Player", 0.5}};
    s.annotator.lag = 1.0;
    s.annotator.smoothing = 0.5;
    s.annotator.drift = 0.0;
    s.annotator.noise_sd = 0.0;  // resolved per session from noise_rel
    return s;
}

StudySettings parse(std::istream& is) {
    StudySettings s = defaults();
    bool cues_section_seen = false;

    static const std::set<std::string> kSections{"study",    "annotator", "cues",
                                                 "channels", "pipeline",  "train"};
    std::string section;
    std::set<std::string> seen;  // "section.key" duplicates are errors
    std::string line;
    long line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#' || text[0] == ';') continue;
        if (text.front() == '[') {
            if (text.back() != ']') bad(line_no, "unterminated section header");
            section = trim(text.substr(1, text.size() - 2));
            if (!kSections.count(section)) bad(line_no, "unknown section [" + section + "]");
            if (section == "cues" && !cues_section_seen) {
                // an explicit cue list replaces the default weights entirely
                s.annotator.cue_weights.clear();
                cues_section_seen = true;
            }
            continue;
        }
        const size_t eq = text.find('=');
        if (eq == std::string::npos) bad(line_no, "expected 'key = value'");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));
        if (key.empty()) bad(line_no, "empty key");
        if (section.empty()) bad(line_no, "key '" + key + "' appears before any [section]");
        if (!seen.insert(section + "." + key).second)
            bad(line_no, "duplicate key '" + key + "' in [" + section + "]");

        if (section == "study") {
            if (key == "participants")
                s.study.participants = static_cast<int>(want_long(key, value, line_no));
            else if (key == "sessions")
                s.study.sessions_per = static_cast<int>(want_long(key, value, line_no));
            else if (key == "seed")
                s.study.base_seed = want_seed(key, value, line_no);
            else if (key == "duration")
                s.study.base.duration = want_double(key, value, line_no);
            else if (key == "tick_rate")
                s.study.base.tick_rate = want_double(key, value, line_no);
            else
                bad(line_no, "unknown key '" + key + "' in [study]");
        } else if (section == "annotator") {
            if (key == "lag")
                s.annotator.lag = want_double(key, value, line_no);
            else if (key == "noise")
                s.noise_rel = want_double(key, value, line_no);
            else if (key == "smoothing")
                s.annotator.smoothing = want_double(key, value, line_no);
            else if (key == "drift")
                s.annotator.drift = want_double(key, value, line_no);
            else
                bad(line_no, "unknown key '" + key + "' in [annotator]");
        } else if (section == "cues") {
            try {
                sim::feature_index(key);  // cue weights must name telemetry features
            } catch (const DataError&) {
                bad(line_no, "unknown cue '" + key + "'");
            }
            s.annotator.cue_weights[key] = want_double(key, value, line_no);
        } else if (section == "channels") {
            if (key == "kind") {
                if (value != "noise23" && value != "none")
                    bad(line_no, "channels kind must be 'noise23' or 'none'");
                s.channels = value;
            } else if (key == "gap_rate") {
                s.channel_gap_rate = want_double(key, value, line_no);
            } else {
                bad(line_no, "unknown key '" + key + "' in [channels]");
            }
        } else if (section == "pipeline") {
            if (key == "w")
                s.pipe.w = want_double(key, value, line_no);
            else if (key == "l")
                s.pipe.l = want_double(key, value, line_no);
            else if (key == "tie_epsilon")
                s.pipe.tie_epsilon = want_double(key, value, line_no);
            else
                bad(line_no, "unknown key '" + key + "' in [pipeline]");
        } else if (section == "train") {
            if (key == "kernel") {
                try {
                    s.hp.kernel = svm::parse_kernel(value);
                } catch (const ConfigError&) {
                    bad(line_no, "kernel must be 'linear' or 'rbf'");
                }
            } else if (key == "C") {
                s.hp.C = want_double(key, value, line_no);
            } else if (key == "gamma") {
                s.hp.gamma = want_double(key, value, line_no);
            } else if (key == "pair_cap") {
                s.pair_cap = want_long(key, value, line_no);
            } else if (key == "threads") {
                s.threads = static_cast<int>(want_long(key, value, line_no));
            } else {
                bad(line_no, "unknown key '" + key + "' in [train]");
            }
        }
    }

    if (s.study.participants <= 0) throw ConfigError("config: participants must be positive");
    if (s.study.sessions_per <= 0) throw ConfigError("config: sessions must be positive");
    if (s.noise_rel < 0) throw ConfigError("config: noise must be non-negative");
    if (s.channel_gap_rate < 0) throw ConfigError("config: gap_rate must be non-negative");
    if (s.pair_cap < 0) throw ConfigError("config: pair_cap must be non-negative");
    if (s.threads < 0) throw ConfigError("config: threads must be non-negative");
    return s;
}

StudySettings load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file: " + path);
    return parse(is);
}

}  // namespace mazing::config
