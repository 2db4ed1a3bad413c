#pragma once

namespace demontape {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace demontape
