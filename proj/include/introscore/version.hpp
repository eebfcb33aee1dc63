#pragma once

namespace introscore {

inline constexpr const char* kToolVersion = "0.1.0";

// Version stamp carried by every file format this tool reads or writes.
inline constexpr const char* kFormatVersion = "1";

}  // namespace introscore
