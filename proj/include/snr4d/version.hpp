#pragma once

namespace snr4d {

inline constexpr const char* version_string = "0.1.0";

}  // namespace snr4d
