#pragma once

namespace hrgm {

inline constexpr const char* kLibraryName = "hrgm";
inline constexpr const char* kLibraryVersion = "0.1.0";

}  // namespace hrgm
