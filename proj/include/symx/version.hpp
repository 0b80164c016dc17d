#pragma once

namespace symx {
inline constexpr const char* version = "0.1.0";
}
