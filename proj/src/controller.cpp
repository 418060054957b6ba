#include "pyra/controller.hpp"

#include <cmath>
#include <stdexcept>

namespace pyra {

ControllerState make_controller(double base_speed) {
    ControllerState st;
    st.base_speed = base_speed;
    st.motor_speeds = {base_speed, base_speed, base_speed, base_speed};
    return st;
}

std::pair<ControllerState, std::vector<ControlEvent>> step(const ControllerState& state,
                                                           double similarity, long frame_index,
                                                           const ControllerParams& params) {
    if (similarity < 0.0 || similarity > 1.0)
        throw std::invalid_argument("controller: similarity out of [0,1]");

    ControllerState next = state;
    std::vector<ControlEvent> events;

    if (similarity > params.stop_threshold) {
        next.mode = ControllerState::Mode::Stopped;
        next.motor_speeds = {0.0, 0.0, 0.0, 0.0};
        next.consecutive_high = state.consecutive_high + 1;
        if (next.consecutive_high >= params.alarm_consecutive && !next.alarm_latched) {
            next.alarm_latched = true;
            events.push_back({ControlEvent::Kind::Alarm, next.motor_speeds, frame_index});
        }
    } else {
        next.mode = similarity >= params.slow_band_low ? ControllerState::Mode::Slow
                                                       : ControllerState::Mode::Normal;
        double v = state.base_speed * (1.0 - similarity);
        next.motor_speeds = {v, v, v, v};
        next.consecutive_high = 0;
        next.alarm_latched = false;
    }

    for (int i = 0; i < 4; ++i) {
        if (std::abs(next.motor_speeds[static_cast<std::size_t>(i)] -
                     state.motor_speeds[static_cast<std::size_t>(i)]) > 1e-9) {
            events.push_back({ControlEvent::Kind::SpeedChange, next.motor_speeds, frame_index});
            break;
        }
    }
    return {next, events};
}

ControllerState reset(const ControllerState& state) { return make_controller(state.base_speed); }

const char* mode_name(ControllerState::Mode mode) {
    switch (mode) {
        case ControllerState::Mode::Normal: return "normal";
        case ControllerState::Mode::Slow: return "slow";
        case ControllerState::Mode::Stopped: return "stopped";
    }
    return "?";
}

}  // namespace pyra
