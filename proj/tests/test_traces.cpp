#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mazing/csv.hpp"
#include "mazing/sim.hpp"
#include "mazing/traces.hpp"

using namespace mazing;
using namespace mazing::traces;

namespace {

// Hand-built telemetry: one feature ramps, everything else stays zero.
std::vector<sim::TelemetryFrame> ramp_frames(int count, double dt, int column,
                                             double slope) {
    std::vector<sim::TelemetryFrame> frames(count);
    for (int i = 0; i < count; ++i) {
        frames[i].t = i * dt;
        frames[i].v[column] = slope * frames[i].t;
    }
    return frames;
}

AnnotatorModel raw_model(std::map<std::string, double> weights, double lag = 0.0) {
    AnnotatorModel m;
    m.cue_weights = std::move(weights);
    m.lag = lag;
    m.noise_sd = 0.0;
    m.smoothing = 0.0;  // no EMA: output equals the lagged weighted sum
    m.drift = 0.0;
    return m;
}

std::string to_csv(const AnnotationTrace& t) {
    std::ostringstream os;
    write_trace_csv(os, t);
    return os.str();
}

std::string to_csv(const ModalityChannel& c) {
    std::ostringstream os;
    write_channel_csv(os, c);
    return os.str();
}

AnnotationTrace trace_from(const std::string& text, std::vector<std::string>* warn = nullptr) {
    std::istringstream is(text);
    return ingest_trace(is, warn);
}

ModalityChannel channel_from(const std::string& text, std::vector<std::string>* warn = nullptr) {
    std::istringstream is(text);
    return ingest_channel(is, warn);
}

std::string error_message(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("synthesis: samples lie on the 10 Hz grid across the telemetry span") {
    auto frames = ramp_frames(1800, 1.0 / 30.0, sim::feat::kScore, 1.0);
    Rng rng(7);
    auto trace = synthesize_trace(frames, raw_model({{"Score", 1.0}}), rng);
    REQUIRE(trace.samples.size() == 600);  // 60 s at 10 Hz
    for (size_t k = 0; k < trace.samples.size(); ++k)
        CHECK(trace.samples[k].t == static_cast<double>(k) / 10.0);
}

TEST_CASE("synthesis: zero-order hold reads the frame in force at t - lag") {
    // Frames every 0.5 s; the cue jumps at each frame boundary.
    std::vector<sim::TelemetryFrame> frames(5);
    for (int i = 0; i < 5; ++i) {
        frames[i].t = 0.5 * i;
        frames[i].v[sim::feat::kScore] = 10.0 * i;
    }
    Rng rng(1);
    auto trace = synthesize_trace(frames, raw_model({{"Score", 1.0}}, /*lag=*/0.0), rng);
    REQUIRE(trace.samples.size() == 21);  // t = 0.0 .. 2.0
    CHECK(trace.samples[0].value == 0.0);
    CHECK(trace.samples[4].value == 0.0);    // t=0.4 still inside frame 0
    CHECK(trace.samples[5].value == 10.0);   // t=0.5 picks up frame 1
    CHECK(trace.samples[20].value == 40.0);  // last frame holds

    // With a 1 s lag the same outputs arrive 10 samples later, and everything
    // before the lag horizon reads the session start.
    Rng rng2(1);
    auto lagged = synthesize_trace(frames, raw_model({{"Score", 1.0}}, /*lag=*/1.0), rng2);
    REQUIRE(lagged.samples.size() == 21);
    for (int k = 0; k <= 10; ++k)
        CHECK(lagged.samples[k].value == trace.samples[std::max(0, k - 10)].value);
    CHECK(lagged.samples[15].value == trace.samples[5].value);
}

TEST_CASE("synthesis: weighted sum combines cues; unknown cues are rejected") {
    std::vector<sim::TelemetryFrame> frames(4);
    for (int i = 0; i < 4; ++i) {
        frames[i].t = 0.1 * i;
        frames[i].v[sim::feat::kScore] = 100.0;
        frames[i].v[sim::feat::kChasingPlayer] = 1.0;
    }
    Rng rng(3);
    auto trace =
        synthesize_trace(frames, raw_model({{"Score", 1.0}, {"Chasing Player", 0.5}}), rng);
    for (const auto& s : trace.samples) CHECK(s.value == doctest::Approx(100.5).epsilon(1e-12));

    Rng rng2(3);
    CHECK_THROWS_AS(synthesize_trace(frames, raw_model({{"Blink Rate", 1.0}}), rng2), DataError);
    std::string msg = error_message(
        [&] { Rng r(3); synthesize_trace(frames, raw_model({{"Blink Rate", 1.0}}), r); });
    CHECK(msg.find("unknown cue") != std::string::npos);
    CHECK(msg.find("Blink Rate") != std::string::npos);
}

TEST_CASE("synthesis: exponential smoothing tracks a step without overshoot") {
    // Step from 0 to 100 at t = 1.0 in the underlying cue.
    std::vector<sim::TelemetryFrame> frames(100);
    for (int i = 0; i < 100; ++i) {
        frames[i].t = 0.1 * i;
        frames[i].v[sim::feat::kScore] = frames[i].t >= 1.0 ? 100.0 : 0.0;
    }
    AnnotatorModel m = raw_model({{"Score", 1.0}});
    m.smoothing = 0.5;
    Rng rng(5);
    auto trace = synthesize_trace(frames, m, rng);
    const double alpha = 1.0 - std::exp(-0.1 / 0.5);
    double ema = 0.0;
    for (size_t k = 0; k < trace.samples.size(); ++k) {
        const double x = trace.samples[k].t >= 1.0 ? 100.0 : 0.0;
        ema = (k == 0) ? x : ema + alpha * (x - ema);
        CHECK(trace.samples[k].value == doctest::Approx(ema).epsilon(1e-12));
        CHECK(trace.samples[k].value <= 100.0 + 1e-9);  // convex combination: no overshoot
    }
    // Within ~5 time constants the EMA has essentially converged.
    CHECK(trace.samples.back().value > 99.0);
}

TEST_CASE("synthesis: drift alone yields a strictly increasing trace") {
    auto frames = ramp_frames(300, 1.0 / 30.0, sim::feat::kScore, 0.0);
    AnnotatorModel m;  // no cues at all
    m.lag = 1.0;
    m.noise_sd = 0.0;
    m.smoothing = 0.5;
    m.drift = 2.0;
    Rng rng(11);
    auto trace = synthesize_trace(frames, m, rng);
    REQUIRE(trace.samples.size() == 100);
    for (size_t k = 0; k < trace.samples.size(); ++k) {
        CHECK(trace.samples[k].value == doctest::Approx(2.0 * trace.samples[k].t).epsilon(1e-12));
        if (k > 0) CHECK(trace.samples[k].value > trace.samples[k - 1].value);
    }
}

TEST_CASE("synthesis: the noise draw is taken even when noise_sd is zero") {
    auto frames = ramp_frames(60, 1.0 / 30.0, sim::feat::kScore, 1.0);
    AnnotatorModel quiet = raw_model({{"Score", 1.0}});
    AnnotatorModel noisy = quiet;
    noisy.noise_sd = 3.0;
    Rng a(99), b(99);
    auto ta = synthesize_trace(frames, quiet, a);
    auto tb = synthesize_trace(frames, noisy, b);
    REQUIRE(ta.samples.size() == tb.samples.size());
    // Same seed, same consumption: downstream draws must stay aligned.
    CHECK(a.next_u64() == b.next_u64());
    // And the noisy trace actually differs from the quiet one.
    bool any_diff = false;
    for (size_t k = 0; k < ta.samples.size(); ++k)
        if (ta.samples[k].value != tb.samples[k].value) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("synthesis: parameter validation") {
    auto frames = ramp_frames(10, 1.0 / 30.0, sim::feat::kScore, 1.0);
    Rng rng(1);
    AnnotatorModel m = raw_model({{"Score", 1.0}});
    m.lag = -0.1;
    CHECK_THROWS_AS(synthesize_trace(frames, m, rng), ConfigError);
    m.lag = 0.0;
    m.noise_sd = -1.0;
    CHECK_THROWS_AS(synthesize_trace(frames, m, rng), ConfigError);
    m.noise_sd = 0.0;
    m.smoothing = -0.5;
    CHECK_THROWS_AS(synthesize_trace(frames, m, rng), ConfigError);
    CHECK(synthesize_trace({}, raw_model({{"Score", 1.0}}), rng).samples.empty());
}

TEST_CASE("synthesis: determinism of a full session trace") {
    sim::SessionConfig cfg;
    cfg.condition = sim::Condition::BAND_50_75;
    cfg.seed = 42;
    auto result = sim::run_session(cfg);
    AnnotatorModel m;
    m.cue_weights = {{"Score", 1.0}, {"Chasing Player", 0.5}};
    m.noise_sd = 1.0;
    Rng r1(derive_seed(42, 0, 1, 2)), r2(derive_seed(42, 0, 1, 2));
    auto t1 = synthesize_trace(result.frames, m, r1);
    auto t2 = synthesize_trace(result.frames, m, r2);
    REQUIRE(t1.samples.size() == 600);
    CHECK(to_csv(t1) == to_csv(t2));
}

TEST_CASE("channels: canonical name list has the 23 facial features") {
    const auto& names = canonical_channel_names();
    REQUIRE(names.size() == 23);
    std::set<std::string> uniq(names.begin(), names.end());
    CHECK(uniq.size() == 23);
    CHECK(uniq.count("Joy"));
    CHECK(uniq.count("Contempt"));
    CHECK(uniq.count("Valence"));
    CHECK(uniq.count("Engagement"));
    CHECK(uniq.count("BrowFurrow"));
    CHECK(uniq.count("MouthOpen"));
    CHECK(names.front() == "Contempt");
    CHECK(names.back() == "MouthOpen");
}

TEST_CASE("channels: bounded smoothed noise on the grid, no gaps by default") {
    Rng rng(123);
    auto chans = synthesize_noise_channels(canonical_channel_names(), 60.0, rng);
    REQUIRE(chans.size() == 23);
    for (const auto& ch : chans) {
        CHECK(ch.gaps.empty());
        REQUIRE(ch.samples.size() == 600);
        for (size_t k = 0; k < ch.samples.size(); ++k) {
            CHECK(ch.samples[k].t == static_cast<double>(k) / 10.0);
            CHECK(ch.samples[k].value >= 0.0);
            CHECK(ch.samples[k].value <= 100.0);
        }
    }
    // Smoothing caps the step size: successive samples move at most 10% of range.
    for (size_t k = 1; k < chans[0].samples.size(); ++k)
        CHECK(std::abs(chans[0].samples[k].value - chans[0].samples[k - 1].value) <=
              10.0 + 1e-9);

    Rng rng2(123);
    auto again = synthesize_noise_channels(canonical_channel_names(), 60.0, rng2);
    bool identical = true;
    for (size_t c = 0; c < chans.size(); ++c)
        if (to_csv(chans[c]) != to_csv(again[c])) identical = false;
    CHECK(identical);

    // Channels draw from one sequential stream, so they differ from each other.
    CHECK(to_csv(chans[0]) != to_csv(chans[1]));
}

TEST_CASE("channels: gaps hide samples and are recorded as intervals") {
    Rng rng(77);
    auto chans = synthesize_noise_channels({"Joy", "Anger"}, 120.0, rng, /*gap_rate=*/0.2);
    bool saw_gap = false;
    for (const auto& ch : chans) {
        const long grid_points = 1200;
        long hidden = 0;
        for (long k = 0; k < grid_points; ++k) {
            const double t = static_cast<double>(k) / 10.0;
            bool in_gap = false;
            for (const auto& g : ch.gaps)
                if (t >= g.t_begin - 1e-12 && t < g.t_end - 1e-12) in_gap = true;
            if (in_gap) ++hidden;
        }
        CHECK(ch.samples.size() + hidden == static_cast<size_t>(grid_points));
        for (const auto& s : ch.samples)
            for (const auto& g : ch.gaps) CHECK(!(s.t >= g.t_begin - 1e-12 && s.t < g.t_end - 1e-12));
        for (size_t i = 0; i < ch.gaps.size(); ++i) {
            CHECK(ch.gaps[i].t_end - ch.gaps[i].t_begin >= 0.5 - 1e-9);
            CHECK(ch.gaps[i].t_end - ch.gaps[i].t_begin <= 1.5 + 1e-9);
            if (i > 0) CHECK(ch.gaps[i].t_begin >= ch.gaps[i - 1].t_end - 1e-12);
        }
        if (!ch.gaps.empty()) saw_gap = true;
    }
    // 0.2 gaps/s over 120 s makes a gap-free run astronomically unlikely.
    CHECK(saw_gap);
}

TEST_CASE("round trip: trace CSV is bit-exact on the synthesis grid") {
    auto frames = ramp_frames(900, 1.0 / 30.0, sim::feat::kScore, 0.7);
    AnnotatorModel m = raw_model({{"Score", 1.0}});
    m.noise_sd = 2.5;
    m.smoothing = 0.5;
    Rng rng(2024);
    auto trace = synthesize_trace(frames, m, rng);
    const std::string text = to_csv(trace);
    auto back = trace_from(text);
    REQUIRE(back.samples.size() == trace.samples.size());
    for (size_t k = 0; k < trace.samples.size(); ++k) {
        CHECK(back.samples[k].t == trace.samples[k].t);
        CHECK(back.samples[k].value == trace.samples[k].value);
    }
    CHECK(to_csv(back) == text);  // export is idempotent
}

TEST_CASE("round trip: channel CSV preserves name, gaps, and samples") {
    Rng rng(55);
    auto chans = synthesize_noise_channels({"Surprise"}, 90.0, rng, 0.3);
    const auto& ch = chans[0];
    REQUIRE(!ch.gaps.empty());
    const std::string text = to_csv(ch);
    CHECK(text.rfind("# name: Surprise\n", 0) == 0);
    auto back = channel_from(text);
    CHECK(back.name == ch.name);
    REQUIRE(back.gaps.size() == ch.gaps.size());
    for (size_t i = 0; i < ch.gaps.size(); ++i) {
        CHECK(back.gaps[i].t_begin == ch.gaps[i].t_begin);
        CHECK(back.gaps[i].t_end == ch.gaps[i].t_end);
    }
    REQUIRE(back.samples.size() == ch.samples.size());
    for (size_t k = 0; k < ch.samples.size(); ++k) {
        CHECK(back.samples[k].t == ch.samples[k].t);
        CHECK(back.samples[k].value == ch.samples[k].value);
    }
    CHECK(to_csv(back) == text);
}

TEST_CASE("round trip: fuzzed values survive export/ingest bit-exactly") {
    Rng rng(314159);
    AnnotationTrace trace;
    for (int k = 0; k < 1000; ++k) {
        double v;
        do {
            uint64_t bits = rng.next_u64();
            std::memcpy(&v, &bits, sizeof v);
        } while (!std::isfinite(v));
        trace.samples.push_back({static_cast<double>(k) / 10.0, v});
    }
    const std::string text = to_csv(trace);
    auto back = trace_from(text);
    REQUIRE(back.samples.size() == trace.samples.size());
    for (size_t k = 0; k < trace.samples.size(); ++k) {
        CHECK(back.samples[k].t == trace.samples[k].t);
        CHECK(back.samples[k].value == trace.samples[k].value);
    }
    CHECK(to_csv(back) == text);
}

TEST_CASE("ingest: timestamps are normalized to start at zero") {
    auto t = trace_from("t_ms,value\n5000,1.5\n5100,2.5\n5250,3\n");
    REQUIRE(t.samples.size() == 3);
    CHECK(t.samples[0].t == 0.0);
    CHECK(t.samples[1].t == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(t.samples[2].t == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(t.samples[2].value == 3.0);

    // Channel: gaps share the clock, and a gap may precede the first sample.
    auto ch = channel_from(
        "# name: Joy\n# gap: 9000 9800\nt_ms,value\n10000,50\n10100,60\n");
    CHECK(ch.gaps[0].t_begin == 0.0);
    CHECK(ch.gaps[0].t_end == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(ch.samples[0].t == doctest::Approx(1.0).epsilon(1e-12));

    // A synthesized channel that happens to open with a gap at t = 0 is
    // already zero-based and must come back unchanged.
    auto ch2 = channel_from("# name: Joy\n# gap: 0 1200\nt_ms,value\n1200,50\n1300,60\n");
    CHECK(ch2.gaps[0].t_begin == 0.0);
    CHECK(ch2.samples[0].t == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("ingest: empty input yields an empty result plus a warning") {
    std::vector<std::string> warn;
    auto t = trace_from("", &warn);
    CHECK(t.samples.empty());
    REQUIRE(warn.size() == 1);
    CHECK(warn[0].find("no samples") != std::string::npos);

    warn.clear();
    auto t2 = trace_from("t_ms,value\n", &warn);  // header only
    CHECK(t2.samples.empty());
    CHECK(warn.size() == 1);

    warn.clear();
    auto ch = channel_from("# name: Joy\nt_ms,value\n", &warn);
    CHECK(ch.name == "Joy");
    CHECK(ch.samples.empty());
    CHECK(warn.size() == 1);

    // A healthy file produces no warnings.
    warn.clear();
    trace_from("t_ms,value\n0,1\n100,2\n", &warn);
    CHECK(warn.empty());
}

TEST_CASE("ingest: malformed rows are rejected with their line number") {
    auto check_fails = [](const std::string& text, const char* tag, const char* line_str,
                          bool channel = false) {
        std::string msg = error_message([&] {
            std::istringstream is(text);
            if (channel)
                ingest_channel(is);
            else
                ingest_trace(is);
        });
        INFO("text: " << text << " -> " << msg);
        CHECK(msg.find(tag) == 0);
        CHECK(msg.find(line_str) != std::string::npos);
    };

    check_fails("nonsense header\n0,1\n", "MALFORMED_ROW", "line 1");
    check_fails("t_ms,value\n0,1\n100\n", "MALFORMED_ROW", "line 3");
    check_fails("t_ms,value\n0,1\n100,2,3\n", "MALFORMED_ROW", "line 3");
    check_fails("t_ms,value\nabc,1\n", "MALFORMED_ROW", "line 2");
    check_fails("t_ms,value\n0,fast\n", "MALFORMED_ROW", "line 2");
    check_fails("t_ms,value\n0,nan\n", "MALFORMED_ROW", "line 2");
    check_fails("t_ms,value\n0,1\n200,2\n100,3\n", "NON_MONOTONIC_TIME", "line 4");
    check_fails("t_ms,value\n0,1\n100,2\n100,3\n", "NON_MONOTONIC_TIME", "line 4");
    check_fails("# name: Joy\nt_ms,value\n0,101\n", "OUT_OF_RANGE", "line 3", true);
    check_fails("# name: Joy\nt_ms,value\n0,-0.5\n", "OUT_OF_RANGE", "line 3", true);
    check_fails("# name: Joy\nt_ms,value\n0,nan\n", "OUT_OF_RANGE", "line 3", true);
    check_fails("# name: Joy\n# gap: 500\nt_ms,value\n0,1\n", "MALFORMED_ROW", "line 2", true);
    check_fails("# name: Joy\n# gap: 800 500\nt_ms,value\n0,1\n", "MALFORMED_ROW", "line 2",
                true);
    check_fails("# name: Joy\n# gap: 0 600\n# gap: 500 900\nt_ms,value\n0,1\n",
                "NON_MONOTONIC_TIME", "line 3", true);

    // Trace files accept values a bounded channel would reject.
    auto t = trace_from("t_ms,value\n0,250\n100,-3e4\n");
    CHECK(t.samples[0].value == 250.0);
    CHECK(t.samples[1].value == -3e4);
}

TEST_CASE("ingest: blank lines and foreign comments are tolerated") {
    auto t = trace_from("# produced by an external annotator tool\nt_ms,value\n\n0,1\n100,2\n\n");
    REQUIRE(t.samples.size() == 2);
    CHECK(t.samples[1].value == 2.0);

    std::string msg = error_message([] {
        std::istringstream is("t_ms,value\n0,1\n");
        ingest_trace(is);
        throw DataError("marker");  // reached only if ingest succeeded
    });
    CHECK(msg == "marker");
}

TEST_CASE("load: missing files raise DataError with the path") {
    CHECK_THROWS_AS(load_trace("/nonexistent/trace.csv"), DataError);
    std::string msg = error_message([] { load_channel("/nonexistent/ch.csv"); });
    CHECK(msg.find("/nonexistent/ch.csv") != std::string::npos);
}
