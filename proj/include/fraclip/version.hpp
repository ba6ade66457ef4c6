#pragma once

namespace fraclip {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fraclip
