#pragma once

namespace mockq {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace mockq
