#pragma once

#include <string>
#include <string_view>

#include "kqmolsa/quantizer.hpp"

namespace kqmolsa {

inline constexpr int kDescriptorSchemaVersion = 1;

/// .kq.json document. Doubles are written with 17 significant digits so a
/// write/read round trip is exact.
std::string descriptor_to_json(const ShapeDescriptor& d);
/// Throws ParseError on malformed documents or an unknown schema version.
ShapeDescriptor descriptor_from_json(std::string_view text);

void write_descriptor(const ShapeDescriptor& d, const std::string& path);
ShapeDescriptor read_descriptor(const std::string& path);

}  // namespace kqmolsa
