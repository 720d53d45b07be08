#include "stamp/pseudo_label.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_set>

#include "stamp/error.hpp"

namespace stamp {

void PseudoLabelParams::validate() const {
    for (double v : {conf_threshold, area_ratio_threshold, iou_threshold}) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ValidationError("pseudo-label thresholds must lie in [0, 1]");
        }
    }
}

std::vector<Annotation> select_pseudo_labels(const ImageRecord& image, const std::vector<Prediction>& predictions,
                                             const std::vector<Annotation>& ground_truth, const ValidityMask& mask,
                                             const PseudoLabelParams& params) {
    params.validate();
    if (mask.width() != image.width || mask.height() != image.height) {
        std::ostringstream msg;
        msg << "mask is " << mask.width() << "x" << mask.height() << " but image " << image.id << " is "
            << image.width << "x" << image.height;
        throw ValidationError(msg.str());
    }
    for (const auto& p : predictions) {
        if (p.image_id != image.id) {
            throw ValidationError("prediction for image " + std::to_string(p.image_id) + " mixed into image " +
                                  std::to_string(image.id));
        }
    }
    for (const auto& g : ground_truth) {
        if (g.image_id != image.id) {
            throw ValidationError("ground truth annotation " + std::to_string(g.id) + " belongs to image " +
                                  std::to_string(g.image_id) + ", not " + std::to_string(image.id));
        }
    }

    std::vector<Annotation> kept;
    for (const auto& p : predictions) {
        if (!(p.confidence > params.conf_threshold)) continue;
        if (!(invalid_fraction(p.bbox, mask) >= params.area_ratio_threshold)) continue;
        const bool duplicate = std::any_of(ground_truth.begin(), ground_truth.end(), [&](const Annotation& g) {
            return iou(p.bbox, g.bbox) >= params.iou_threshold;
        });
        if (duplicate) continue;
        Annotation a{.id = 0, .image_id = image.id, .category_id = p.category_id, .bbox = p.bbox};
        a.source = AnnotationSource::Pseudo;
        a.confidence = p.confidence;
        kept.push_back(std::move(a));
    }
    return kept;
}

Dataset merge_pseudo(const Dataset& ds, const std::vector<Annotation>& pseudo) {
    std::unordered_set<ImageId> image_ids;
    for (const auto& im : ds.images) image_ids.insert(im.id);
    Dataset out = ds;
    AnnotationId next = ds.max_annotation_id();
    for (const auto& p : pseudo) {
        if (!image_ids.contains(p.image_id)) {
            throw ValidationError("pseudo label references missing image_id " + std::to_string(p.image_id));
        }
        if (!p.confidence) {
            throw ValidationError("pseudo label without confidence on image " + std::to_string(p.image_id));
        }
        Annotation a = p;
        a.id = ++next;
        a.source = AnnotationSource::Pseudo;
        if (!a.extra.contains("area")) a.extra["area"] = a.bbox.area();
        if (!a.extra.contains("iscrowd")) a.extra["iscrowd"] = 0;
        out.annotations.push_back(std::move(a));
    }
    validate_dataset(out);
    return out;
}

std::vector<Prediction> predictions_from_json(const Json& value) {
    if (!value.is_array()) throw ValidationError("predictions must be a JSON array");
    std::vector<Prediction> out;
    out.reserve(value.size());
    for (std::size_t i = 0; i < value.size(); ++i) {
        const Json& j = value[i];
        const std::string ctx = "prediction " + std::to_string(i);
        try {
            const Json& b = j.at("bbox");
            if (!b.is_array() || b.size() != 4) throw ValidationError("bbox must be [x, y, w, h]");
            const double score = j.at("score").get<double>();
            if (!(score >= 0.0 && score <= 1.0)) throw ValidationError("score outside [0, 1]");
            out.push_back(Prediction{.image_id = j.at("image_id").get<ImageId>(),
                                     .category_id = j.at("category_id").get<CategoryId>(),
                                     .bbox = BBox(b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                                                  b[3].get<double>()),
                                     .confidence = score});
        } catch (const Json::exception& e) {
            throw ValidationError(ctx + ": " + e.what());
        } catch (const ValidationError& e) {
            throw ValidationError(ctx + ": " + e.what());
        }
    }
    return out;
}

std::vector<Prediction> load_predictions(const std::filesystem::path& path) {
    try {
        return predictions_from_json(read_json_file(path));
    } catch (const ParseError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

}  // namespace stamp
