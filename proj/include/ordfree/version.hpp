#pragma once

namespace ordfree {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace ordfree
