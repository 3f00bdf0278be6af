#pragma once

namespace mlv {

inline constexpr const char* kToolName = "mlvedit";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace mlv
