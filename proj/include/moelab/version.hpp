#pragma once

namespace moelab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace moelab
