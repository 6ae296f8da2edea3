#pragma once

namespace mplab::calibration {

// Frozen after a pilot run; overridable from the [calibration] config section.
inline constexpr double bR_C = 2.0;  // lambda <= C min{|R| / |Delta + 1/2|, sqrt|R|}

}  // namespace mplab::calibration
