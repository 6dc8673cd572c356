#pragma once

namespace ineqreg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ineqreg
