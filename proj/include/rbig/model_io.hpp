#pragma once
#include <iosfwd>
#include <string>

#include "rbig/rbig.hpp"

namespace rbig {

inline constexpr const char* kModelFormat = "rbig-model/1";

/// Serializes a fitted model as an "rbig-model/1" JSON document. Floats are
/// written so that they read back to the identical 64-bit value.
std::string model_to_json(const RbigModel& model);
void save_model(const RbigModel& model, const std::string& path);

/// Parses and validates a model document: format tag, dimensions, knot
/// monotonicity and rotation orthogonality. Throws ParseError on malformed
/// input.
RbigModel model_from_json(const std::string& text);
RbigModel load_model(const std::string& path);

}  // namespace rbig
