#pragma once

namespace conemeans {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace conemeans
