#pragma once

namespace iis {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace iis
