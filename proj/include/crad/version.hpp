#pragma once

namespace crad {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace crad
