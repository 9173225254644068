#pragma once
// Small CSV helpers: deterministic number formatting and strict row parsing.
// Fields never contain commas or quotes in any of our file formats, so no
// quoting support is needed (or wanted: malformed rows must be detectable).

#include <cstdio>
#include <string>
#include <vector>

namespace mazing {

// Shortest-ish deterministic formatting; %.17g round-trips doubles exactly.
inline std::string fmt_double(double v, int precision = 12) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
    return buf;
}

inline std::string fmt_double_exact(double v) { return fmt_double(v, 17); }

inline bool parse_double(const std::string& s, double& out);

// Shortest decimal string that parses back to exactly the same double.
inline std::string fmt_double_shortest(double v) {
    for (int p = 1; p < 17; ++p) {
        std::string s = fmt_double(v, p);
        double back;
        if (parse_double(s, back) && back == v) return s;
    }
    return fmt_double(v, 17);
}

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

// Strict double parse: the whole field must be consumed.
inline bool parse_double(const std::string& s, double& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
}

inline bool parse_long(const std::string& s, long& out) {
    if (s.empty()) return false;
    char* end = nullptr;
    out = std::strtol(s.c_str(), &end, 10);
    return end == s.c_str() + s.size();
}

}  // namespace mazing
