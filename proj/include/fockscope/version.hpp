#pragma once

namespace fockscope {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace fockscope
