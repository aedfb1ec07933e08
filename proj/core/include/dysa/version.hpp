#pragma once

namespace dysa {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dysa
