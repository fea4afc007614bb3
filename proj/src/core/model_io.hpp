#pragma once

#include <string>

#include "core/models.hpp"

namespace tabguard {

// Versioned binary model file, little-endian throughout. Save -> load ->
// eval round-trips bit-exactly.
void save_model(const TrainedModel& model, const std::string& path);
TrainedModel load_model(const std::string& path);

}  // namespace tabguard
