#pragma once

namespace slelab {
inline constexpr const char* version = "0.1.0";
}
