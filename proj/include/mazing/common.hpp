#pragma once
// Shared basic types: 2-D vectors, grid cells, poses, angles, error taxonomy.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace mazing {

inline constexpr double kPi = 3.14159265358979323846;

inline double deg2rad(double d) { return d * (kPi / 180.0); }
inline double rad2deg(double r) { return r * (180.0 / kPi); }

// Wrap to [-pi, pi).
inline double wrap_angle(double a) {
    a = std::fmod(a + kPi, 2.0 * kPi);
    if (a < 0) a += 2.0 * kPi;
    return a - kPi;
}

// Wrap heading to [0, 2*pi).
inline double wrap_heading(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0) a += 2.0 * kPi;
    return a;
}

struct Vec2 {
    double x = 0, y = 0;
    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double norm() const { return std::sqrt(x * x + y * y); }
    Vec2 normalized() const {
        double n = norm();
        return n > 0 ? Vec2{x / n, y / n} : Vec2{0, 0};
    }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// Integer grid cell; cells are unit squares, cell (cx,cy) spans [cx,cx+1)x[cy,cy+1).
struct Cell {
    int cx = -1, cy = -1;
    bool operator==(const Cell& o) const { return cx == o.cx && cy == o.cy; }
    bool operator!=(const Cell& o) const { return !(*this == o); }
};

inline Cell cell_of(const Vec2& p) {
    return {static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y))};
}

inline Vec2 cell_center(const Cell& c) { return {c.cx + 0.5, c.cy + 0.5}; }

// Continuous position plus heading in [0, 2*pi).
struct Pose {
    Vec2 position;
    double heading = 0;
};

// Error taxonomy mirrored by CLI exit codes: config 2, data 3, stage 4.
enum class ErrorClass { Config = 2, Data = 3, Stage = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& msg) : std::runtime_error(msg), cls_(cls) {}
    ErrorClass cls() const { return cls_; }
    int exit_code() const { return static_cast<int>(cls_); }

private:
    ErrorClass cls_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(ErrorClass::Config, msg) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(ErrorClass::Data, msg) {}
};

class StageError : public Error {
public:
    explicit StageError(const std::string& msg) : Error(ErrorClass::Stage, msg) {}
};

}  // namespace mazing
