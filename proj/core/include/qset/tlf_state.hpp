#pragma once

#include <cstdint>

namespace qset {

// Which well of the double-well potential the fluctuator occupies.
enum class TlfState : std::uint8_t { L = 0, R = 1 };

}  // namespace qset
