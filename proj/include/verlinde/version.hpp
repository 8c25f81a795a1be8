#pragma once

namespace verlinde {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace verlinde
