#pragma once

namespace godist {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace godist
