#pragma once

#include <string_view>

namespace rbig {

// Warnings go to stderr unless silenced (tests and the acceptance runner
// silence them).
void warn(std::string_view message);
void set_warnings_enabled(bool enabled);
bool warnings_enabled();

}  // namespace rbig
