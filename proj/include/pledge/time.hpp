#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace pledge {

/// Simulated time in integer ticks. One tick is 100 ms.
using Time = std::int64_t;

inline constexpr Time kInfinity = std::numeric_limits<Time>::max();
inline constexpr Time kTicksPerSecond = 10;

inline std::string time_to_string(Time t) {
    return t == kInfinity ? std::string("inf") : std::to_string(t);
}

} // namespace pledge
