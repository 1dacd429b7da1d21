#pragma once

namespace xphase {

inline constexpr const char* kToolName = "xphase";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace xphase
