#pragma once

namespace egt {

inline constexpr const char* kToolName = "egtlab";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace egt
