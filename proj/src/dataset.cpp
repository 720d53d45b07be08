#include "stamp/dataset.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "stamp/error.hpp"

namespace stamp {

const char* to_string(AnnotationSource source) noexcept {
    switch (source) {
        case AnnotationSource::GroundTruth: return "ground_truth";
        case AnnotationSource::Transferred: return "transferred";
        case AnnotationSource::Pseudo: return "pseudo";
    }
    return "ground_truth";
}

const ImageRecord* Dataset::find_image(ImageId id) const noexcept {
    auto it = std::find_if(images.begin(), images.end(), [id](const ImageRecord& im) { return im.id == id; });
    return it == images.end() ? nullptr : &*it;
}

const Annotation* Dataset::find_annotation(AnnotationId id) const noexcept {
    auto it = std::find_if(annotations.begin(), annotations.end(), [id](const Annotation& a) { return a.id == id; });
    return it == annotations.end() ? nullptr : &*it;
}

const Category* Dataset::find_category(CategoryId id) const noexcept {
    auto it = std::find_if(categories.begin(), categories.end(), [id](const Category& c) { return c.id == id; });
    return it == categories.end() ? nullptr : &*it;
}

ImageId Dataset::max_image_id() const noexcept {
    ImageId best = 0;
    for (const auto& im : images) best = std::max(best, im.id);
    return best;
}

AnnotationId Dataset::max_annotation_id() const noexcept {
    AnnotationId best = 0;
    for (const auto& a : annotations) best = std::max(best, a.id);
    return best;
}

std::vector<Annotation> Dataset::annotations_for(ImageId image_id) const {
    std::vector<Annotation> out;
    for (const auto& a : annotations) {
        if (a.image_id == image_id) out.push_back(a);
    }
    return out;
}

namespace {

[[noreturn]] void fail(const std::string& what) { throw ValidationError(what); }

}  // namespace

void validate_dataset(const Dataset& ds) {
    std::unordered_set<CategoryId> category_ids;
    for (const auto& c : ds.categories) {
        if (!category_ids.insert(c.id).second) {
            fail("duplicate category id " + std::to_string(c.id));
        }
    }

    std::unordered_map<ImageId, const ImageRecord*> images;
    for (const auto& im : ds.images) {
        if (!images.emplace(im.id, &im).second) {
            fail("duplicate image id " + std::to_string(im.id));
        }
        if (im.width <= 0 || im.height <= 0) {
            std::ostringstream msg;
            msg << "image " << im.id << " has non-positive size " << im.width << "x" << im.height;
            fail(msg.str());
        }
    }
    for (const auto& im : ds.images) {
        if (!im.synthetic) continue;
        auto it = images.find(im.synthetic->source_image_id);
        if (it == images.end()) {
            fail("synthetic image " + std::to_string(im.id) + " references missing source image " +
                 std::to_string(im.synthetic->source_image_id));
        }
        if (it->second->is_synthetic()) {
            fail("synthetic image " + std::to_string(im.id) + " references source image " +
                 std::to_string(im.synthetic->source_image_id) + " which is itself synthetic");
        }
        if (im.synthetic->frame_index < 0) {
            fail("synthetic image " + std::to_string(im.id) + " has negative frame index");
        }
    }

    std::unordered_set<AnnotationId> annotation_ids;
    for (const auto& a : ds.annotations) {
        const std::string tag = "annotation " + std::to_string(a.id);
        if (!annotation_ids.insert(a.id).second) {
            fail("duplicate annotation id " + std::to_string(a.id));
        }
        auto it = images.find(a.image_id);
        if (it == images.end()) {
            fail(tag + " references missing image_id " + std::to_string(a.image_id));
        }
        if (!category_ids.contains(a.category_id)) {
            fail(tag + " references missing category_id " + std::to_string(a.category_id));
        }
        const bool pseudo = a.source == AnnotationSource::Pseudo;
        if (pseudo != a.confidence.has_value()) {
            fail(tag + (pseudo ? " is a pseudo label without a confidence" : " carries a confidence but is not a pseudo label"));
        }
        if (a.confidence && !(*a.confidence >= 0.0 && *a.confidence <= 1.0)) {
            fail(tag + " confidence outside [0, 1]");
        }
        const ImageRecord& im = *it->second;
        if (a.bbox.right() > im.width || a.bbox.bottom() > im.height) {
            fail(tag + " bbox extends beyond image " + std::to_string(im.id));
        }
        if (a.segmentation && (a.segmentation->height != im.height || a.segmentation->width != im.width)) {
            fail(tag + " segmentation size does not match image " + std::to_string(im.id));
        }
    }
}

}  // namespace stamp
