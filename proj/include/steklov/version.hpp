#pragma once

namespace steklov {

inline constexpr const char* version = "0.1.0";

}  // namespace steklov
