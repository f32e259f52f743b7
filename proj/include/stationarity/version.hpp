#pragma once

namespace stationarity {

inline constexpr const char* kSoftwareName = "stationarity";
inline constexpr const char* kSoftwareVersion = "0.1.0";

}  // namespace stationarity
