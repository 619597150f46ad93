#pragma once

namespace parhom {
inline constexpr const char* kVersion = "0.1.0";
}
