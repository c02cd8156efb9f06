#pragma once

namespace smflow {

inline constexpr const char* kToolName = "smflow";
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace smflow
