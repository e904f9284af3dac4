#pragma once

namespace galrep {
inline constexpr const char* kVersion = "0.1.0";
}
