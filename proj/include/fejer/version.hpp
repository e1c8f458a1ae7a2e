#pragma once

namespace fejer {

inline constexpr const char* kName = "fejer-torus";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace fejer
