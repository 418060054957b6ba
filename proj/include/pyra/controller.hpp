#pragma once

#include <array>
#include <string>
#include <vector>

namespace pyra {

// Similarity-driven arm speed state machine. Four motors: two vertical
// slide motors, two horizontal arm motors.
struct ControllerState {
    enum class Mode { Normal, Slow, Stopped };

    Mode mode = Mode::Normal;
    int consecutive_high = 0;
    std::array<double, 4> motor_speeds{};
    double base_speed = 0.56;
    bool alarm_latched = false;
};

struct ControlEvent {
    enum class Kind { SpeedChange, Alarm };

    Kind kind = Kind::SpeedChange;
    std::array<double, 4> speeds{};
    long frame_index = 0;
};

struct ControllerParams {
    double slow_band_low = 0.7;
    double stop_threshold = 0.9;
    int alarm_consecutive = 5;
};

ControllerState make_controller(double base_speed = 0.56);

// One frame transition. similarity > stop threshold stops the arms and
// bumps the consecutive counter (alarm once at the configured run length);
// otherwise speed = base * (1 - similarity), Slow mode inside the
// [slow_band_low, stop_threshold] band.
std::pair<ControllerState, std::vector<ControlEvent>> step(const ControllerState& state,
                                                           double similarity, long frame_index = 0,
                                                           const ControllerParams& params = {});

ControllerState reset(const ControllerState& state);

const char* mode_name(ControllerState::Mode mode);

}  // namespace pyra
