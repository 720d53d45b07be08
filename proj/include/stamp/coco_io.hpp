#pragma once

#include <filesystem>

#include "stamp/dataset.hpp"

namespace stamp {

// Reserved keys carrying toolkit metadata inside otherwise plain COCO JSON.
// Consumers that ignore unknown keys see an ordinary detection dataset.
inline constexpr const char* kProvenanceKey = "stamp_provenance";
inline constexpr const char* kSourceKey = "stamp_source";
inline constexpr const char* kScoreKey = "score";

Dataset dataset_from_json(const Json& root);
Json dataset_to_json(const Dataset& ds);

/// Parses and validates. Boxes overhanging their image are clamped to it.
Dataset load_coco(const std::filesystem::path& path);
void save_coco(const Dataset& ds, const std::filesystem::path& path);

}  // namespace stamp
