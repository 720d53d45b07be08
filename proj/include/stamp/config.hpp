#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stamp/coverage.hpp"
#include "stamp/curation.hpp"
#include "stamp/disocclusion.hpp"
#include "stamp/io.hpp"
#include "stamp/pseudo_label.hpp"
#include "stamp/transfer.hpp"

namespace stamp {

struct PathsConfig {
    std::filesystem::path dataset;
    std::filesystem::path clips_dir;
    std::filesystem::path flows_dir;    // <clip_id>.flw
    std::filesystem::path tracks_dir;   // <clip_id>.trk
    std::filesystem::path frames_dir;   // synthetic frame PNGs, addressed by image file_name
    std::filesystem::path masks_dir;    // <image_id>.json validity masks
    std::filesystem::path predictions;
    std::filesystem::path embeddings_train;
    std::filesystem::path embeddings_val;
    std::filesystem::path scores;
    std::filesystem::path output_dir;
};

struct FrameSelection {
    int stride = 5;
    int count = 8;
    int offset = 0;
};

struct DisocclusionConfig {
    std::string mode = "dense";  // dense | hull | extreme
    DenseMaskParams dense;
};

struct CurationConfig {
    double remove_fraction = 0.1;
    int clip_frames = 81;
    bool crops_enabled = false;
    CropOptions crops;
    std::int64_t max_area = kDefaultMaxArea;
    int multiple = 32;
    std::uint64_t seed = 0;
};

struct ManifestConfig {
    int epochs = 8;
    std::uint64_t seed = 0;
    bool balanced = true;
};

struct Config {
    PathsConfig paths;
    TransferOptions transfer;
    FrameSelection frames;
    DisocclusionConfig disocclusion;
    PseudoLabelParams pseudo;
    RecallParams recall;
    KidParams kid;
    CurationConfig curation;
    ManifestConfig manifest;
};

/// Defaults for every field, as JSON in the config-file schema.
Json default_config_json();

/// Missing keys keep their defaults; unknown keys are rejected. Relative paths
/// resolve against base_dir. Numeric invariants are checked.
Config config_from_json(const Json& value, const std::filesystem::path& base_dir);
Json config_to_json(const Config& config);

/// Applies "section.key=value" overrides to config JSON. Values parse as JSON
/// when possible, otherwise as strings.
void apply_override(Json& config, const std::string& assignment);

/// Reads a config file; relative paths in it are relative to the file's directory.
Json read_config_json(const std::filesystem::path& path);

void validate_config(const Config& config);

}  // namespace stamp
