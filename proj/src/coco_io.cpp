#include "stamp/coco_io.hpp"

#include <unordered_map>

#include "stamp/error.hpp"

namespace stamp {

namespace {

const Json& require(const Json& obj, const char* key, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ValidationError(ctx + ": missing field '" + key + "'");
    }
    return *it;
}

std::int64_t require_int(const Json& obj, const char* key, const std::string& ctx) {
    const Json& v = require(obj, key, ctx);
    if (!v.is_number_integer()) {
        throw ValidationError(ctx + ": field '" + key + "' must be an integer");
    }
    return v.get<std::int64_t>();
}

std::string require_string(const Json& obj, const char* key, const std::string& ctx) {
    const Json& v = require(obj, key, ctx);
    if (!v.is_string()) {
        throw ValidationError(ctx + ": field '" + key + "' must be a string");
    }
    return v.get<std::string>();
}

const Json& require_array(const Json& root, const char* key) {
    auto it = root.find(key);
    if (it == root.end()) {
        static const Json empty = Json::array();
        return empty;
    }
    if (!it->is_array()) {
        throw ValidationError(std::string("top-level '") + key + "' must be an array");
    }
    return *it;
}

Json extras_of(const Json& obj, std::initializer_list<const char*> known) {
    Json extra = Json::object();
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool is_known = false;
        for (const char* k : known) {
            if (it.key() == k) {
                is_known = true;
                break;
            }
        }
        if (!is_known) extra[it.key()] = it.value();
    }
    return extra;
}

AnnotationSource parse_source(const std::string& s, const std::string& ctx) {
    if (s == "ground_truth") return AnnotationSource::GroundTruth;
    if (s == "transferred") return AnnotationSource::Transferred;
    if (s == "pseudo") return AnnotationSource::Pseudo;
    throw ValidationError(ctx + ": unknown " + kSourceKey + " '" + s + "'");
}

ImageRecord parse_image(const Json& j) {
    if (!j.is_object()) throw ValidationError("image entry must be an object");
    ImageRecord im;
    im.id = require_int(j, "id", "image");
    const std::string ctx = "image " + std::to_string(im.id);
    im.file_name = require_string(j, "file_name", ctx);
    im.width = static_cast<int>(require_int(j, "width", ctx));
    im.height = static_cast<int>(require_int(j, "height", ctx));
    if (auto it = j.find(kProvenanceKey); it != j.end()) {
        if (!it->is_object()) throw ValidationError(ctx + ": " + kProvenanceKey + " must be an object");
        SyntheticOrigin origin;
        origin.source_image_id = require_int(*it, "source_image_id", ctx);
        origin.clip_id = require_string(*it, "clip_id", ctx);
        origin.frame_index = static_cast<int>(require_int(*it, "frame_index", ctx));
        im.synthetic = origin;
    }
    im.extra = extras_of(j, {"id", "file_name", "width", "height", kProvenanceKey});
    return im;
}

Annotation parse_annotation(const Json& j, const std::unordered_map<ImageId, const ImageRecord*>& images) {
    if (!j.is_object()) throw ValidationError("annotation entry must be an object");
    const std::int64_t id = require_int(j, "id", "annotation");
    const std::string ctx = "annotation " + std::to_string(id);
    const ImageId image_id = require_int(j, "image_id", ctx);
    const CategoryId category_id = require_int(j, "category_id", ctx);

    const Json& b = require(j, "bbox", ctx);
    if (!b.is_array() || b.size() != 4) throw ValidationError(ctx + ": bbox must be [x, y, w, h]");
    double v[4];
    for (int i = 0; i < 4; ++i) {
        if (!b[i].is_number()) throw ValidationError(ctx + ": bbox entries must be numbers");
        v[i] = b[i].get<double>();
    }

    auto img = images.find(image_id);
    if (img == images.end()) {
        throw ValidationError(ctx + " references missing image_id " + std::to_string(image_id));
    }
    std::optional<BBox> box;
    try {
        box = BBox(v[0], v[1], v[2], v[3]).clamped(img->second->width, img->second->height);
    } catch (const ValidationError& e) {
        throw ValidationError(ctx + ": " + e.what());
    }
    if (!box) throw ValidationError(ctx + ": bbox lies outside image " + std::to_string(image_id));

    Annotation a{.id = id, .image_id = image_id, .category_id = category_id, .bbox = *box};
    std::vector<const char*> known = {"id", "image_id", "category_id", "bbox", kSourceKey};
    if (auto it = j.find(kSourceKey); it != j.end()) {
        if (!it->is_string()) throw ValidationError(ctx + ": " + kSourceKey + " must be a string");
        a.source = parse_source(it->get<std::string>(), ctx);
    }
    if (a.source == AnnotationSource::Pseudo) {
        const Json& s = require(j, kScoreKey, ctx);
        if (!s.is_number()) throw ValidationError(ctx + ": score must be a number");
        a.confidence = s.get<double>();
        known.push_back(kScoreKey);
    }
    if (auto it = j.find("segmentation"); it != j.end() && it->is_object() && it->contains("counts") &&
                                          it->at("counts").is_array()) {
        try {
            a.segmentation = mask_from_json(*it);
        } catch (const ValidationError& e) {
            throw ValidationError(ctx + ": segmentation: " + e.what());
        }
        known.push_back("segmentation");
    }
    a.extra = Json::object();
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool is_known = false;
        for (const char* k : known) is_known = is_known || it.key() == k;
        if (!is_known) a.extra[it.key()] = it.value();
    }
    return a;
}

}  // namespace

Dataset dataset_from_json(const Json& root) {
    if (!root.is_object()) throw ValidationError("COCO root must be a JSON object");
    Dataset ds;
    for (const Json& j : require_array(root, "categories")) {
        if (!j.is_object()) throw ValidationError("category entry must be an object");
        Category c;
        c.id = require_int(j, "id", "category");
        c.name = require_string(j, "name", "category " + std::to_string(c.id));
        c.extra = extras_of(j, {"id", "name"});
        ds.categories.push_back(std::move(c));
    }
    for (const Json& j : require_array(root, "images")) {
        ds.images.push_back(parse_image(j));
    }
    std::unordered_map<ImageId, const ImageRecord*> by_id;
    for (const auto& im : ds.images) by_id.emplace(im.id, &im);
    for (const Json& j : require_array(root, "annotations")) {
        ds.annotations.push_back(parse_annotation(j, by_id));
    }
    ds.extra = extras_of(root, {"images", "annotations", "categories"});
    validate_dataset(ds);
    return ds;
}

Json dataset_to_json(const Dataset& ds) {
    Json root = ds.extra.is_object() ? ds.extra : Json::object();
    Json images = Json::array();
    for (const auto& im : ds.images) {
        Json j = im.extra;
        j["id"] = im.id;
        j["file_name"] = im.file_name;
        j["width"] = im.width;
        j["height"] = im.height;
        if (im.synthetic) {
            j[kProvenanceKey] = {{"source_image_id", im.synthetic->source_image_id},
                                 {"clip_id", im.synthetic->clip_id},
                                 {"frame_index", im.synthetic->frame_index}};
        }
        images.push_back(std::move(j));
    }
    Json annotations = Json::array();
    for (const auto& a : ds.annotations) {
        Json j = a.extra;
        j["id"] = a.id;
        j["image_id"] = a.image_id;
        j["category_id"] = a.category_id;
        j["bbox"] = {a.bbox.x(), a.bbox.y(), a.bbox.w(), a.bbox.h()};
        if (a.source != AnnotationSource::GroundTruth) j[kSourceKey] = to_string(a.source);
        if (a.confidence) j[kScoreKey] = *a.confidence;
        if (a.segmentation) j["segmentation"] = mask_to_json(*a.segmentation);
        annotations.push_back(std::move(j));
    }
    Json categories = Json::array();
    for (const auto& c : ds.categories) {
        Json j = c.extra;
        j["id"] = c.id;
        j["name"] = c.name;
        categories.push_back(std::move(j));
    }
    root["images"] = std::move(images);
    root["annotations"] = std::move(annotations);
    root["categories"] = std::move(categories);
    return root;
}

Dataset load_coco(const std::filesystem::path& path) {
    Json root = read_json_file(path);
    try {
        return dataset_from_json(root);
    } catch (const ParseError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    } catch (const Json::exception& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void save_coco(const Dataset& ds, const std::filesystem::path& path) {
    write_json_file(path, dataset_to_json(ds));
}

}  // namespace stamp
