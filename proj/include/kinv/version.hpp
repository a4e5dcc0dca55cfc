#pragma once

namespace kinv {

inline constexpr const char* tool_name = "kinv";
inline constexpr const char* tool_version = "1.0.0";

}  // namespace kinv
