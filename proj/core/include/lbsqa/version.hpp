#pragma once

namespace lbsqa {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace lbsqa
