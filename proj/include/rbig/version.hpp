#pragma once

namespace rbig {
inline constexpr const char* kToolVersion = "0.1.0";
}
