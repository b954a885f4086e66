#pragma once

#include <filesystem>

#include "ergokit/nn/eval.hpp"
#include "ergokit/nn/model.hpp"

namespace ergokit::nn {

// Versioned JSON model files. Loaders reject unknown format versions and
// any weight array whose length does not match the architecture.
void save_model(const AngleModel& model, const std::filesystem::path& path);
AngleModel load_model(const std::filesystem::path& path);

// A model directory holds 16 files named <ANGLE>.json.
void save_models(const ModelSet& models, const std::filesystem::path& dir);
ModelSet load_models(const std::filesystem::path& dir);

}  // namespace ergokit::nn
