#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stamp/geometry.hpp"
#include "stamp/io.hpp"
#include "stamp/rle.hpp"

namespace stamp {

using ImageId = std::int64_t;
using AnnotationId = std::int64_t;
using CategoryId = std::int64_t;

/// Where a synthetic frame came from: a generated clip conditioned on a real image.
struct SyntheticOrigin {
    ImageId source_image_id = 0;
    std::string clip_id;
    int frame_index = 0;

    bool operator==(const SyntheticOrigin&) const = default;
};

struct ImageRecord {
    ImageId id = 0;
    std::string file_name;
    int width = 0;
    int height = 0;
    std::optional<SyntheticOrigin> synthetic;  // nullopt = real image
    Json extra = Json::object();               // unknown COCO keys, round-tripped verbatim

    bool is_synthetic() const noexcept { return synthetic.has_value(); }
    bool operator==(const ImageRecord&) const = default;
};

enum class AnnotationSource { GroundTruth, Transferred, Pseudo };

const char* to_string(AnnotationSource source) noexcept;

struct Annotation {
    AnnotationId id = 0;
    ImageId image_id = 0;
    CategoryId category_id = 0;
    BBox bbox;
    AnnotationSource source = AnnotationSource::GroundTruth;
    std::optional<double> confidence;          // present iff source == Pseudo
    std::optional<BinaryMask> segmentation;    // uncompressed RLE only
    Json extra = Json::object();

    bool operator==(const Annotation&) const = default;
};

struct Category {
    CategoryId id = 0;
    std::string name;
    Json extra = Json::object();

    bool operator==(const Category&) const = default;
};

struct Dataset {
    std::vector<ImageRecord> images;
    std::vector<Annotation> annotations;
    std::vector<Category> categories;
    Json extra = Json::object();  // top-level keys such as "info" and "licenses"

    const ImageRecord* find_image(ImageId id) const noexcept;
    const Annotation* find_annotation(AnnotationId id) const noexcept;
    const Category* find_category(CategoryId id) const noexcept;

    /// 0 when empty, so fresh ids start at 1.
    ImageId max_image_id() const noexcept;
    AnnotationId max_annotation_id() const noexcept;

    std::vector<Annotation> annotations_for(ImageId image_id) const;

    bool operator==(const Dataset&) const = default;
};

/// Throws ValidationError describing the first violated invariant: unique ids,
/// positive image dims, resolvable image/category references, synthetic
/// provenance pointing at a real image, confidence present iff pseudo and
/// within [0, 1], boxes inside their image.
void validate_dataset(const Dataset& ds);

}  // namespace stamp
