#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "stamp/bitmap.hpp"
#include "stamp/geometry.hpp"
#include "stamp/io.hpp"

namespace stamp {

// Uncompressed COCO run-length encoding. Pixels are scanned column-major
// (down each column, then left to right) and runs alternate 0,1,0,1,...
// starting with a run of zeros, which is 0 when the first pixel is set.
struct BinaryMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint32_t> counts;

    bool operator==(const BinaryMask&) const = default;
};

/// Throws ValidationError unless dims are positive, counts sum to height*width
/// and no zero run appears except the leading one.
void validate_mask(const BinaryMask& mask);

BinaryMask rle_encode(const Bitmap& bitmap);
Bitmap rle_decode(const BinaryMask& mask);

/// Number of set pixels, computed from the runs.
std::uint64_t mask_area(const BinaryMask& mask);

/// Tightest box around the set pixels, or nullopt for an empty mask.
std::optional<BBox> bbox_from_mask(const BinaryMask& mask);

/// {"size": [h, w], "counts": [...]}
Json mask_to_json(const BinaryMask& mask);
BinaryMask mask_from_json(const Json& value);

BinaryMask load_mask_file(const std::filesystem::path& path);
void save_mask_file(const std::filesystem::path& path, const BinaryMask& mask);

}  // namespace stamp
