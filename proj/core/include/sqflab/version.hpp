#pragma once

#define SQFLAB_VERSION "0.1.0"

namespace sqflab {
inline constexpr const char* version() { return SQFLAB_VERSION; }
}
