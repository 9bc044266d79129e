// Model persistence: deterministic JSON text, atomic file writes, bit-exact
// projection round-trip.
#pragma once

#include <string>

#include "core/pipeline.hpp"

namespace spdml {

std::string serialize_model(const SpdMlModel& model);
SpdMlModel parse_model(const std::string& text);

// Writes via a temporary file in the same directory plus rename, so readers
// never observe a half-written model.
void save_model(const SpdMlModel& model, const std::string& path);
SpdMlModel load_model(const std::string& path);

}  // namespace spdml
