#pragma once

namespace macsi {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace macsi
