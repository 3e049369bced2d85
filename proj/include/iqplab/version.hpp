#pragma once

namespace iqplab {

inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace iqplab
