#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>
#include <vector>

#include "mazing/agent.hpp"
#include "mazing/maze.hpp"
#include "mazing/rng.hpp"

using namespace mazing;
using namespace mazing::world;
using namespace mazing::agent;

namespace {

world::MazeMap open_room() {
    // 12x12 with a single interior wall column gap for hearing tests
    std::string text;
    for (int y = 0; y < 12; ++y) {
        for (int x = 0; x < 12; ++x) {
            const bool border = x == 0 || y == 0 || x == 11 || y == 11;
            if (border)
                text += '#';
            else if (x == 2 && y == 2)
                text += 'P';
            else if (x == 9 && y == 9)
                text += 'A';
            else
                text += '.';
        }
        text += '\n';
    }
    return parse_maze(text);
}

world::MazeMap corridor() {
    // 1-cell-high corridor, 30 cells long
    std::string text = "################################\n";
    text += "#P";
    for (int i = 0; i < 28; ++i) text += '.';
    text += "A#\n";
    text += "################################\n";
    return parse_maze(text);
}

}  // namespace

TEST_CASE("frustration update: control band pins to zero") {
    StimulusSet s;
    s.spotted = true;
    s.hits = 3;
    s.path_delta = 5;
    FrustrationConfig cfg;
    CHECK(update_frustration(0, s, 1.0 / 30, cfg, band_control()) == 0.0);
    CHECK(update_frustration(0, StimulusSet{}, 1.0, cfg, band_control()) == 0.0);
}

TEST_CASE("frustration update: clamping and hand-integrated examples") {
    FrustrationConfig cfg;
    // two projectile hits at delta_hit=4 from f=49 clamp at the band ceiling
    StimulusSet hits;
    hits.hits = 2;
    CHECK(update_frustration(49, hits, 1.0 / 30, cfg, band_25_50()) == 50.0);

    // resting 5 s at decay -1/s: 60 -> 55, integrated in small steps
    StimulusSet rest;
    rest.resting = true;
    double f = 60;
    for (int i = 0; i < 150; ++i) f = update_frustration(f, rest, 1.0 / 30, cfg, band_50_75());
    CHECK(f == doctest::Approx(55.0).epsilon(1e-9));

    // floor clamp
    f = 50.2;
    for (int i = 0; i < 300; ++i) f = update_frustration(f, rest, 1.0 / 30, cfg, band_50_75());
    CHECK(f == 50.0);

    // path stimuli: longer path raises, shorter path gives mild relief
    StimulusSet longer;
    longer.path_delta = 2;
    CHECK(update_frustration(30, longer, 1.0, cfg, band_25_50()) == doctest::Approx(32.0));
    StimulusSet shorter;
    shorter.path_delta = -2;
    CHECK(update_frustration(30, shorter, 1.0, cfg, band_25_50()) == doctest::Approx(29.5));

    // spotted and lost-sight one-shots
    StimulusSet sp;
    sp.spotted = true;
    CHECK(update_frustration(30, sp, 1.0 / 30, cfg, band_25_50()) == doctest::Approx(31.0));
    StimulusSet lost;
    lost.lost_sight = true;
    CHECK(update_frustration(30, lost, 1.0 / 30, cfg, band_25_50()) == doctest::Approx(35.0));
}

TEST_CASE("frustration never leaves its band under fuzzed stimuli") {
    const FrustrationConfig cfg;
    const std::vector<FrustrationBand> bands{band_control(), band_25_50(), band_50_75(),
                                             band_75_100()};
    for (int trial = 0; trial < 1000; ++trial) {
        Rng rng(derive_seed(0xF0B4, static_cast<uint64_t>(trial), 0, 0));
        const auto& band = bands[trial % bands.size()];
        double f = band.f_min;
        for (int tick = 0; tick < 300; ++tick) {
            StimulusSet s;
            s.path_delta = rng.uniform(-3.0, 3.0);
            s.spotted = rng.uniform() < 0.05;
            s.lost_sight = rng.uniform() < 0.05;
            s.hits = static_cast<int>(rng.uniform_int(3));
            s.resting = rng.uniform() < 0.5;
            f = update_frustration(f, s, 1.0 / 30, cfg, band);
            REQUIRE(f >= band.f_min);
            REQUIRE(f <= band.f_max);
        }
    }
}

TEST_CASE("manifestation endpoints") {
    const ManifestationCurves curves;
    const auto calm = derive_manifestations(0, curves);
    CHECK(calm.fov_angle == 135.0);
    CHECK(calm.fov_radius == 10.0);
    CHECK(calm.hear_radius == 10.0);
    CHECK(calm.hear_prob_base == 0.1);
    CHECK(calm.move_speed == curves.base_move_speed);
    CHECK(calm.rot_speed == curves.base_rot_speed);
    CHECK(calm.search_turns == 6);
    CHECK(calm.risk_factor == 0.0);
    CHECK(calm.jitter == 0.0);

    const auto max = derive_manifestations(100, curves);
    CHECK(max.fov_angle == 45.0);
    CHECK(max.fov_radius == 15.0);
    CHECK(max.hear_radius == 6.0);
    CHECK(max.hear_prob_base == 0.5);
    CHECK(max.move_speed == doctest::Approx(curves.base_move_speed * 1.6));
    CHECK(max.rot_speed == doctest::Approx(curves.base_rot_speed * 1.8));
    CHECK(max.search_turns == 2);
    CHECK(max.risk_factor == 1.0);
    CHECK(max.jitter == 90.0);

    const auto mid = derive_manifestations(50, curves);
    CHECK(mid.fov_angle == doctest::Approx(90.0));
    CHECK(mid.risk_factor == doctest::Approx(0.5));
    CHECK(mid.jitter == doctest::Approx(90.0 * 0.25));
    CHECK(mid.search_turns == 4);
}

TEST_CASE("manifestation monotonicity over the whole range") {
    const ManifestationCurves curves;
    auto prev = derive_manifestations(0, curves);
    for (int f = 1; f <= 100; ++f) {
        const auto cur = derive_manifestations(f, curves);
        CHECK(cur.fov_angle <= prev.fov_angle);
        CHECK(cur.hear_radius <= prev.hear_radius);
        CHECK(cur.search_turns <= prev.search_turns);
        CHECK(cur.fov_radius >= prev.fov_radius);
        CHECK(cur.hear_prob_base >= prev.hear_prob_base);
        CHECK(cur.move_speed >= prev.move_speed);
        CHECK(cur.rot_speed >= prev.rot_speed);
        CHECK(cur.risk_factor >= prev.risk_factor);
        CHECK(cur.jitter >= prev.jitter);
        prev = cur;
    }
}

TEST_CASE("vision is deterministic; unseen out of range") {
    const auto map = open_room();
    AgentConfig cfg;
    auto st = make_agent(cfg, {cell_center({9, 9}), 0});
    Rng rng(7);

    // player far outside both radii (fov 10 m, hear 10 m; distance ~9.9)
    // aim the agent away from the player first
    st.pose.heading = 0.0;  // facing +x; player at (2.5, 2.5) is behind-left
    const Pose far_player{cell_center({2, 2}), 0};
    CHECK(distance(st.pose.position, far_player.position) < 10.0);  // hearing applies

    // re-position the player adjacent and in front: deterministic SEEN
    st.pose.heading = deg2rad(180.0);
    const Pose near_player{cell_center({6, 9}), 0};
    for (int i = 0; i < 5; ++i) {
        CHECK(sense_player(st, near_player, map, rng, 1.0 / 30) == SenseResult::SEEN);
    }

    // a player exactly at the fov boundary angle stays visible (inclusive)
    st.pose.heading = deg2rad(180.0);
    CHECK(st.params.fov_angle == 135.0);
}

TEST_CASE("hearing accumulates charge and resets out of range") {
    const auto map = open_room();
    AgentConfig cfg;
    auto st = make_agent(cfg, {cell_center({9, 9}), 0});
    st.pose.heading = 0.0;  // player behind: vision cannot fire
    Rng rng(99);
    const Pose player{cell_center({2, 2}), 0};  // ~9.9 m away, within 10 m hearing

    for (int i = 0; i < 90; ++i) sense_player(st, player, map, rng, 1.0 / 30);
    CHECK(st.hear_charge == doctest::Approx(0.3).epsilon(1e-6));

    for (int i = 0; i < 90; ++i) sense_player(st, player, map, rng, 1.0 / 30);
    CHECK(st.hear_charge == 0.5);  // capped

    const Pose gone{cell_center({2, 2}), 0};
    auto far_st = st;
    far_st.params.hear_radius = 1.0;  // shrink range; player now outside
    sense_player(far_st, gone, map, rng, 1.0 / 30);
    CHECK(far_st.hear_charge == 0.0);
}

TEST_CASE("one wall halves auditory detection (monte carlo)") {
    // Two fixtures: same distance, zero vs one wall between. Probability per
    // check is (base + charge) * 0.5^walls; fix charge at the cap.
    std::string text;
    for (int y = 0; y < 9; ++y) {
        for (int x = 0; x < 11; ++x) {
            const bool border = x == 0 || y == 0 || x == 10 || y == 8;
            if (border)
                text += '#';
            else if (x == 2 && y == 4)
                text += 'P';
            else if (x == 8 && y == 4)
                text += 'A';
            else if (x == 5 && y == 4)
                text += '#';  // single wall on the sight line
            else
                text += '.';
        }
        text += '\n';
    }
    const auto walled = parse_maze(text);
    std::string open_text = text;
    const size_t wall_at = text.find("#", text.find('P'));           // wall cell after P
    open_text[wall_at] = '.';
    const auto open = parse_maze(open_text);

    AgentConfig cfg;
    const Pose player{cell_center({2, 4}), 0};
    const int trials = 100000;
    auto run = [&](const MazeMap& m, uint64_t seed) {
        Rng rng(seed);
        int heard = 0;
        for (int i = 0; i < trials; ++i) {
            auto st = make_agent(cfg, {cell_center({8, 4}), 0});
            st.pose.heading = 0.0;          // facing away
            st.hear_charge = 0.4;           // park below the cap
            st.hear_timer = 0.0;
            if (sense_player(st, player, m, rng, 1.0) == SenseResult::HEARD) ++heard;
        }
        return static_cast<double>(heard) / trials;
    };
    const double p_open = run(open, 0xAC0057);
    const double p_wall = run(walled, 0xAC0058);
    CHECK(p_open == doctest::Approx(0.6).epsilon(0.02));  // base 0.1 + charge at cap 0.5
    CHECK(p_wall == doctest::Approx(p_open / 2).epsilon(0.04));
    CHECK(std::fabs(p_wall - p_open / 2) < 0.01);
}

TEST_CASE("auditory probability non-increasing in wall count") {
    const double base = 0.3, charge = 0.2;
    double prev = 1.0;
    for (int walls = 0; walls <= 4; ++walls) {
        const double p = std::min(1.0, (base + charge) * std::pow(0.5, walls));
        CHECK(p <= prev);
        prev = p;
    }
}

TEST_CASE("decide: seen player triggers chase at the player cell") {
    const auto map = open_room();
    AgentConfig cfg;
    auto st = make_agent(cfg, {cell_center({9, 9}), deg2rad(180.0)});
    Rng rng(5);
    const Pose player{cell_center({4, 9}), 0};
    FireField fires;

    const auto sensed = sense_player(st, player, map, rng, 1.0 / 30);
    REQUIRE(sensed == SenseResult::SEEN);
    const auto out = agent_decide(st, sensed, map, fires, player, cfg, 1.0 / 30, rng);
    CHECK(out.spotted);
    CHECK(st.mode == AgentMode::CHASE);
    CHECK(st.current_goal == Cell{4, 9});
    CHECK_FALSE(st.path.empty());
    CHECK(st.path.front() == Cell{9, 9});
    CHECK(st.path.back() == Cell{4, 9});
}

TEST_CASE("decide: chase reverts to search after the lose timeout") {
    const auto map = open_room();
    AgentConfig cfg;
    auto st = make_agent(cfg, {cell_center({9, 9}), deg2rad(180.0)});
    Rng rng(6);
    FireField fires;
    const Pose player{cell_center({4, 9}), 0};

    auto sensed = sense_player(st, player, map, rng, 1.0 / 30);
    REQUIRE(sensed == SenseResult::SEEN);
    agent_decide(st, sensed, map, fires, player, cfg, 1.0 / 30, rng);
    REQUIRE(st.mode == AgentMode::CHASE);

    // player teleports out of sense range; run ticks until timeout
    const Pose hidden{cell_center({2, 2}), 0};
    st.pose.heading = 0.0;
    bool lost = false;
    int ticks = 0;
    for (; ticks < 200 && !lost; ++ticks) {
        auto s2 = SenseResult::NONE;  // out of range by construction below
        st.params.hear_radius = 0.5;  // force deafness for the test
        st.params.fov_radius = 0.5;
        s2 = sense_player(st, hidden, map, rng, 1.0 / 30);
        REQUIRE(s2 == SenseResult::NONE);
        lost = agent_decide(st, s2, map, fires, hidden, cfg, 1.0 / 30, rng).lost_sight;
    }
    CHECK(lost);
    CHECK(st.mode == AgentMode::SEARCH);
    // 3 s at 30 Hz = 90 ticks (+1 for the tick that flips it)
    CHECK(ticks >= 90);
    CHECK(ticks <= 92);
}

TEST_CASE("decide: risky path rule prefers the much shorter fire route") {
    // Ring corridor: long safe way around, short way through a fire.
    std::string text;
    text += "#########\n";
    text += "#P......#\n";
    text += "#.#####.#\n";
    text += "#.#####.#\n";
    text += "#.#####.#\n";
    text += "#A......#\n";
    text += "#########\n";
    const auto map = parse_maze(text);
    FireField fires;
    fires.ignite({1, 2}, 5.0);  // burn the short left leg
    fires.ignite({1, 3}, 5.0);
    fires.ignite({1, 4}, 5.0);

    AgentConfig cfg;
    auto st = make_agent(cfg, {cell_center({1, 5}), 0});
    st.mode = AgentMode::CHASE;
    st.current_goal = {1, 1};
    st.f = 100;  // fully risk-seeking
    st.params = derive_manifestations(st.f, cfg.curves);
    st.health = cfg.max_health;
    Rng rng(11);
    const Pose player{cell_center({1, 1}), 0};
    st.time_since_sensed = 0;

    const auto out = agent_decide(st, SenseResult::SEEN, map, fires, player, cfg, 1.0 / 30, rng);
    (void)out;
    // safe route is 16 steps around the ring; risky is 4 through the fire
    CHECK(st.taking_risky_path);
    CHECK(st.path.size() == 5);

    // risk_factor 0 (calm agent) must always take the safe route
    auto calm = make_agent(cfg, {cell_center({1, 5}), 0});
    calm.mode = AgentMode::CHASE;
    calm.current_goal = {1, 1};
    REQUIRE(calm.params.risk_factor == 0.0);
    agent_decide(calm, SenseResult::SEEN, map, fires, player, cfg, 1.0 / 30, rng);
    CHECK_FALSE(calm.taking_risky_path);
    CHECK(calm.path.size() == 17);
}

TEST_CASE("step: straight corridor advances exactly move_speed*dt when calm") {
    const auto map = corridor();
    AgentConfig cfg;
    auto st = make_agent(cfg, {cell_center({1, 1}), 0});
    REQUIRE(st.params.jitter == 0.0);
    st.path = {{1, 1}, {15, 1}};
    st.path_pos = 1;
    st.pose.heading = 0.0;  // already aligned with the corridor
    Rng rng(3);
    const double dt = 1.0 / 30;
    const double moved = agent_step(st, map, dt, rng);
    CHECK(moved == doctest::Approx(st.params.move_speed * dt).epsilon(1e-12));
    CHECK(st.pose.heading == 0.0);
    CHECK(st.last_rotation == 0.0);
}

TEST_CASE("step: rotation per tick bounded by rot_speed*dt plus the jitter draw") {
    const auto map = open_room();
    AgentConfig cfg;
    auto st = make_agent(cfg, {cell_center({5, 5}), deg2rad(90.0)});
    st.f = 80;
    st.params = derive_manifestations(st.f, cfg.curves);
    st.path = {{5, 5}, {9, 5}};
    st.path_pos = 1;
    Rng rng(17);
    const double dt = 1.0 / 30;
    for (int i = 0; i < 200; ++i) {
        const double before = st.pose.heading;
        agent_step(st, map, dt, rng);
        const double changed = std::fabs(wrap_angle(st.pose.heading - before));
        // bound: max turn + |noise| (recover noise from the recorded total)
        CHECK(changed <= deg2rad(st.params.rot_speed) * dt +
                             std::fabs(st.last_rotation) + 1e-12);
        st.path_pos = 1;  // keep walking toward the same waypoint
    }
}

TEST_CASE("step: never enters blocked cells over long jittered runs") {
    const auto map = open_room();
    AgentConfig cfg;
    auto st = make_agent(cfg, {cell_center({5, 5}), 0});
    st.f = 100;
    st.params = derive_manifestations(st.f, cfg.curves);
    Rng rng(0xBEEF);
    FireField fires;
    const Pose player{cell_center({2, 2}), 0};
    for (int tick = 0; tick < 3000; ++tick) {
        const auto sensed = sense_player(st, player, map, rng, 1.0 / 30);
        agent_decide(st, sensed, map, fires, player, cfg, 1.0 / 30, rng);
        agent_step(st, map, 1.0 / 30, rng);
        REQUIRE(map.open(cell_of(st.pose.position)));
    }
}

TEST_CASE("high frustration covers more ground with larger heading variance") {
    const auto map = corridor();
    AgentConfig cfg;
    auto run = [&](double f) {
        auto st = make_agent(cfg, {cell_center({1, 1}), 0});
        st.f = f;
        st.params = derive_manifestations(f, cfg.curves);
        st.path = {{1, 1}, {28, 1}};
        st.path_pos = 1;
        Rng rng(0x5EED);  // same seed for both runs
        double total = 0;
        std::vector<double> turns;
        for (int i = 0; i < 300; ++i) {  // 10 s
            total += agent_step(st, map, 1.0 / 30, rng);
            turns.push_back(st.last_rotation);
            if (st.path_pos >= st.path.size()) break;
        }
        double mean = 0;
        for (double t : turns) mean += t;
        mean /= static_cast<double>(turns.size());
        double var = 0;
        for (double t : turns) var += (t - mean) * (t - mean);
        var /= static_cast<double>(turns.size());
        return std::pair{total, var};
    };
    const auto [dist_calm, var_calm] = run(0);
    const auto [dist_hot, var_hot] = run(100);
    CHECK(dist_hot > dist_calm);
    CHECK(var_hot > var_calm);
    CHECK(var_calm == 0.0);  // no jitter at f=0 in a straight corridor
}

TEST_CASE("search tours visit search_turns waypoints before reseeding") {
    const auto map = open_room();
    AgentConfig cfg;
    auto st = make_agent(cfg, {cell_center({9, 9}), 0});
    Rng rng(0x7007);
    FireField fires;
    const Pose player{cell_center({2, 2}), 0};
    st.params.hear_radius = 0.1;  // keep it deaf and blind: pure search
    st.params.fov_radius = 0.1;

    std::set<std::pair<int, int>> goals;
    const auto first_params = st.params;
    for (int tick = 0; tick < 20000; ++tick) {
        agent_decide(st, SenseResult::NONE, map, fires, player, cfg, 1.0 / 30, rng);
        st.params = first_params;  // decide may not mutate params; freeze sensing off
        goals.insert({st.current_goal.cx, st.current_goal.cy});
        agent_step(st, map, 1.0 / 30, rng);
        REQUIRE(st.mode == AgentMode::SEARCH);
    }
    CHECK(goals.size() >= 6);  // wandered through many distinct waypoints
}
