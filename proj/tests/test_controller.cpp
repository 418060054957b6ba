#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "pyra/controller.hpp"

using namespace pyra;

namespace {

bool has_alarm(const std::vector<ControlEvent>& events) {
    for (const auto& e : events)
        if (e.kind == ControlEvent::Kind::Alarm) return true;
    return false;
}

// Replays a similarity stream and reports whether any alarm fired plus how
// many alarms total.
std::pair<bool, int> replay(const std::vector<double>& stream) {
    ControllerState st = make_controller();
    int alarms = 0;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        auto [next, events] = step(st, stream[i], static_cast<long>(i));
        if (has_alarm(events)) ++alarms;
        st = next;
    }
    return {alarms > 0, alarms};
}

// Independent reading of the alarm rule: a run of 5 consecutive values
// strictly above 0.9 exists somewhere in the stream.
bool oracle_alarm(const std::vector<double>& stream) {
    int run = 0;
    for (double s : stream) {
        run = s > 0.9 ? run + 1 : 0;
        if (run >= 5) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("five frames at 0.95 alarm exactly on frame 5") {
    ControllerState st = make_controller();
    for (int i = 1; i <= 5; ++i) {
        auto [next, events] = step(st, 0.95, i);
        st = next;
        CHECK(st.mode == ControllerState::Mode::Stopped);
        for (double v : st.motor_speeds) CHECK(v == 0.0);
        CHECK(has_alarm(events) == (i == 5));
    }
    CHECK(st.alarm_latched);
    // further high frames do not re-alarm while latched
    auto [next, events] = step(st, 0.99, 6);
    CHECK(!has_alarm(events));
    CHECK(next.alarm_latched);
}

TEST_CASE("similarity 0 runs at full base speed") {
    ControllerState st = make_controller();
    auto [next, events] = step(st, 0.0);
    CHECK(next.mode == ControllerState::Mode::Normal);
    for (double v : next.motor_speeds) CHECK(v == doctest::Approx(0.56));
}

TEST_CASE("similarity 0.8 slows to 0.112") {
    ControllerState st = make_controller();
    auto [next, events] = step(st, 0.8);
    CHECK(next.mode == ControllerState::Mode::Slow);
    for (double v : next.motor_speeds) CHECK(v == doctest::Approx(0.56 * 0.2));
}

TEST_CASE("band boundaries: 0.7 and 0.9 are both Slow") {
    ControllerState st = make_controller();
    CHECK(step(st, 0.7).first.mode == ControllerState::Mode::Slow);
    CHECK(step(st, 0.9).first.mode == ControllerState::Mode::Slow);
    CHECK(step(st, 0.69999).first.mode == ControllerState::Mode::Normal);
    CHECK(step(st, 0.90001).first.mode == ControllerState::Mode::Stopped);
}

TEST_CASE("counter resets on a low frame") {
    auto [fired, count] = replay({0.92, 0.92, 0.5, 0.92});
    CHECK(!fired);
    auto [fired2, count2] = replay({0.92, 0.92, 0.92, 0.92, 0.5, 0.92, 0.92, 0.92, 0.92});
    CHECK(!fired2);
}

TEST_CASE("out-of-range similarity is a contract error") {
    ControllerState st = make_controller();
    CHECK_THROWS(step(st, -0.1));
    CHECK_THROWS(step(st, 1.1));
}

TEST_CASE("step is a pure transition") {
    ControllerState st = make_controller();
    st = step(st, 0.85).first;
    auto a = step(st, 0.95, 3);
    auto b = step(st, 0.95, 3);
    CHECK(a.first.mode == b.first.mode);
    CHECK(a.first.consecutive_high == b.first.consecutive_high);
    CHECK(a.first.motor_speeds == b.first.motor_speeds);
    CHECK(a.second.size() == b.second.size());
}

TEST_CASE("speed change events fire only on actual changes") {
    ControllerState st = make_controller();
    auto [s1, e1] = step(st, 0.5);
    CHECK(!e1.empty());  // base_speed -> 0.28
    auto [s2, e2] = step(s1, 0.5);
    CHECK(e2.empty());  // steady state
}

TEST_CASE("invariant: Stopped iff all speeds zero, speeds within [0, base]") {
    std::mt19937 gen(2);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    ControllerState st = make_controller();
    for (int i = 0; i < 500; ++i) {
        st = step(st, d(gen), i).first;
        bool all_zero = true;
        for (double v : st.motor_speeds) {
            CHECK(v >= 0.0);
            CHECK(v <= st.base_speed);
            if (v != 0.0) all_zero = false;
        }
        CHECK((st.mode == ControllerState::Mode::Stopped) == all_zero);
    }
}

TEST_CASE("reset restores a fresh controller and is idempotent") {
    ControllerState st = make_controller();
    for (int i = 0; i < 7; ++i) st = step(st, 0.95, i).first;
    CHECK(st.alarm_latched);
    ControllerState r = reset(st);
    CHECK(r.mode == ControllerState::Mode::Normal);
    CHECK(r.consecutive_high == 0);
    CHECK(!r.alarm_latched);
    for (double v : r.motor_speeds) CHECK(v == doctest::Approx(r.base_speed));
    ControllerState rr = reset(r);
    CHECK(rr.mode == r.mode);
    CHECK(rr.motor_speeds == r.motor_speeds);
    CHECK(rr.alarm_latched == r.alarm_latched);
}

TEST_CASE("alarm fires iff a 5-run exists: 300 random streams of length 200") {
    std::mt19937 gen(515);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    std::bernoulli_distribution high(0.45);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> stream(200);
        for (auto& s : stream) s = high(gen) ? 0.9 + 0.1 * d(gen) : d(gen) * 0.9;
        auto [fired, count] = replay(stream);
        REQUIRE(fired == oracle_alarm(stream));
    }
}

TEST_CASE("speed is monotonically non-increasing over a similarity sweep") {
    double prev = 1e9;
    for (int i = 0; i <= 1000; ++i) {
        double s = static_cast<double>(i) / 1000.0;
        ControllerState st = make_controller();
        double v = step(st, s).first.motor_speeds[0];
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
}
