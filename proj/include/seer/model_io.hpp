#pragma once

#include <filesystem>

#include "seer/json_util.hpp"
#include "seer/model.hpp"

namespace seer {

/// Version tag written into every model file. It names the GRU variant: the
/// reset gate is applied to h_{t-1} before the recurrent candidate product.
inline constexpr const char* kModelVersion = "seer-gru/1 (standard reset-before-matmul)";

json model_to_json(const ModelBundle& model);
/// Rejects unknown versions (VersionMismatch) and inconsistent dims (BadModelFile).
ModelBundle model_from_json(const json& j);

void save_model(const std::filesystem::path& path, const ModelBundle& model);
ModelBundle load_model(const std::filesystem::path& path);

}  // namespace seer
