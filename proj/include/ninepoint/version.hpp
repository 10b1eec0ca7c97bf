#pragma once

namespace ninepoint {

inline constexpr const char* kVersion = "0.1.0";

} // namespace ninepoint
