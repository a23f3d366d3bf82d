#pragma once

namespace adacurv {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace adacurv
