#pragma once

namespace qik {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace qik
