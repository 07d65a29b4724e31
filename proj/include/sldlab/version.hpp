#pragma once

namespace sldlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sldlab
