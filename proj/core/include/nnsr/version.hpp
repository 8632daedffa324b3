#pragma once

namespace nnsr {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace nnsr
