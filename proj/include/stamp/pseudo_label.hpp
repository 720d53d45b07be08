#pragma once

#include <filesystem>
#include <vector>

#include "stamp/dataset.hpp"
#include "stamp/disocclusion.hpp"

namespace stamp {

/// One detector output from the first training pass.
struct Prediction {
    ImageId image_id = 0;
    CategoryId category_id = 0;
    BBox bbox;
    double confidence = 0.0;
};

struct PseudoLabelParams {
    double conf_threshold = 0.7;
    double area_ratio_threshold = 0.5;
    double iou_threshold = 0.5;

    void validate() const;
};

// A prediction becomes a pseudo label iff
//   confidence > conf_threshold
//   invalid_fraction(box, mask) >= area_ratio_threshold   (mostly in revealed area)
//   iou(box, g) < iou_threshold for every ground-truth box g (transferred boxes count)
// Returned annotations carry id 0; merge_pseudo assigns real ids.
std::vector<Annotation> select_pseudo_labels(const ImageRecord& image, const std::vector<Prediction>& predictions,
                                             const std::vector<Annotation>& ground_truth, const ValidityMask& mask,
                                             const PseudoLabelParams& params);

/// Appends with ids max_annotation_id()+1, +2, ... in input order.
Dataset merge_pseudo(const Dataset& ds, const std::vector<Annotation>& pseudo);

/// JSON array of {image_id, category_id, bbox: [x, y, w, h], score}.
std::vector<Prediction> predictions_from_json(const Json& value);
std::vector<Prediction> load_predictions(const std::filesystem::path& path);

}  // namespace stamp
