#include "stamp/config.hpp"

#include <sstream>

#include "stamp/error.hpp"

namespace stamp {

namespace fs = std::filesystem;

namespace {

constexpr const char* kPathKeys[] = {"dataset",     "clips_dir",        "flows_dir",      "tracks_dir",
                                     "frames_dir",  "masks_dir",        "predictions",    "embeddings_train",
                                     "embeddings_val", "scores",        "output_dir"};

// Recursively overlays `src` on `dst`, rejecting keys absent from the defaults.
void merge_known(Json& dst, const Json& src, const std::string& where) {
    if (!src.is_object()) throw ValidationError("config" + where + " must be an object");
    for (auto it = src.begin(); it != src.end(); ++it) {
        const std::string key = where + "." + it.key();
        if (!dst.contains(it.key())) throw ValidationError("unknown config key '" + key.substr(1) + "'");
        Json& slot = dst[it.key()];
        if (slot.is_object()) {
            merge_known(slot, it.value(), key);
        } else {
            slot = it.value();
        }
    }
}

fs::path resolve(const std::string& p, const fs::path& base) {
    if (p.empty()) return {};
    fs::path path(p);
    return path.is_absolute() || base.empty() ? path : base / path;
}

}  // namespace

Json default_config_json() {
    Config c;
    Json paths = Json::object();
    for (const char* k : kPathKeys) paths[k] = "";
    Json j = config_to_json(c);
    j["paths"] = paths;
    return j;
}

Json config_to_json(const Config& c) {
    const auto& p = c.paths;
    return {
        {"paths",
         {{"dataset", p.dataset.string()},
          {"clips_dir", p.clips_dir.string()},
          {"flows_dir", p.flows_dir.string()},
          {"tracks_dir", p.tracks_dir.string()},
          {"frames_dir", p.frames_dir.string()},
          {"masks_dir", p.masks_dir.string()},
          {"predictions", p.predictions.string()},
          {"embeddings_train", p.embeddings_train.string()},
          {"embeddings_val", p.embeddings_val.string()},
          {"scores", p.scores.string()},
          {"output_dir", p.output_dir.string()}}},
        {"transfer", {{"min_area", c.transfer.min_area}}},
        {"frames", {{"stride", c.frames.stride}, {"count", c.frames.count}, {"offset", c.frames.offset}}},
        {"disocclusion",
         {{"mode", c.disocclusion.mode},
          {"tau_vis", c.disocclusion.dense.vis_threshold},
          {"tau_conf", c.disocclusion.dense.conf_threshold},
          {"sigma", c.disocclusion.dense.sigma},
          {"tau_w", c.disocclusion.dense.weight_threshold}}},
        {"pseudo",
         {{"conf_thr", c.pseudo.conf_threshold},
          {"area_ratio_thr", c.pseudo.area_ratio_threshold},
          {"iou_thr", c.pseudo.iou_threshold}}},
        {"recall", {{"k", c.recall.k}}},
        {"kid", {{"subset_size", c.kid.subset_size}, {"n_subsets", c.kid.n_subsets}, {"seed", c.kid.seed}}},
        {"curation",
         {{"remove_fraction", c.curation.remove_fraction},
          {"clip_frames", c.curation.clip_frames},
          {"crops_enabled", c.curation.crops_enabled},
          {"crop_w", c.curation.crops.crop_width},
          {"crop_h", c.curation.crops.crop_height},
          {"n_crops", c.curation.crops.count},
          {"rescale", c.curation.crops.rescale},
          {"max_area", c.curation.max_area},
          {"multiple", c.curation.multiple},
          {"seed", c.curation.seed}}},
        {"manifest", {{"epochs", c.manifest.epochs}, {"seed", c.manifest.seed}, {"balanced", c.manifest.balanced}}},
    };
}

Config config_from_json(const Json& value, const fs::path& base_dir) {
    Json j = default_config_json();
    merge_known(j, value, "");
    Config c;
    try {
        const Json& p = j.at("paths");
        c.paths.dataset = resolve(p.at("dataset").get<std::string>(), base_dir);
        c.paths.clips_dir = resolve(p.at("clips_dir").get<std::string>(), base_dir);
        c.paths.flows_dir = resolve(p.at("flows_dir").get<std::string>(), base_dir);
        c.paths.tracks_dir = resolve(p.at("tracks_dir").get<std::string>(), base_dir);
        c.paths.frames_dir = resolve(p.at("frames_dir").get<std::string>(), base_dir);
        c.paths.masks_dir = resolve(p.at("masks_dir").get<std::string>(), base_dir);
        c.paths.predictions = resolve(p.at("predictions").get<std::string>(), base_dir);
        c.paths.embeddings_train = resolve(p.at("embeddings_train").get<std::string>(), base_dir);
        c.paths.embeddings_val = resolve(p.at("embeddings_val").get<std::string>(), base_dir);
        c.paths.scores = resolve(p.at("scores").get<std::string>(), base_dir);
        c.paths.output_dir = resolve(p.at("output_dir").get<std::string>(), base_dir);

        c.transfer.min_area = j.at("transfer").at("min_area").get<double>();
        const Json& f = j.at("frames");
        c.frames = {f.at("stride").get<int>(), f.at("count").get<int>(), f.at("offset").get<int>()};
        const Json& d = j.at("disocclusion");
        c.disocclusion.mode = d.at("mode").get<std::string>();
        c.disocclusion.dense = {d.at("tau_vis").get<double>(), d.at("tau_conf").get<double>(),
                                d.at("sigma").get<double>(), d.at("tau_w").get<double>()};
        const Json& ps = j.at("pseudo");
        c.pseudo = {ps.at("conf_thr").get<double>(), ps.at("area_ratio_thr").get<double>(),
                    ps.at("iou_thr").get<double>()};
        c.recall.k = j.at("recall").at("k").get<int>();
        const Json& k = j.at("kid");
        c.kid = {k.at("subset_size").get<int>(), k.at("n_subsets").get<int>(), k.at("seed").get<std::uint64_t>()};
        const Json& cu = j.at("curation");
        c.curation.remove_fraction = cu.at("remove_fraction").get<double>();
        c.curation.clip_frames = cu.at("clip_frames").get<int>();
        c.curation.crops_enabled = cu.at("crops_enabled").get<bool>();
        c.curation.crops = {cu.at("crop_w").get<int>(), cu.at("crop_h").get<int>(), cu.at("n_crops").get<int>(),
                            cu.at("rescale").get<bool>()};
        c.curation.max_area = cu.at("max_area").get<std::int64_t>();
        c.curation.multiple = cu.at("multiple").get<int>();
        c.curation.seed = cu.at("seed").get<std::uint64_t>();
        const Json& m = j.at("manifest");
        c.manifest = {m.at("epochs").get<int>(), m.at("seed").get<std::uint64_t>(), m.at("balanced").get<bool>()};
    } catch (const Json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    validate_config(c);
    return c;
}

void apply_override(Json& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ValidationError("override '" + assignment + "' must look like section.key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    Json value;
    try {
        value = Json::parse(raw);
    } catch (const Json::parse_error&) {
        value = raw;
    }
    Json* node = &config;
    std::size_t start = 0;
    while (true) {
        const auto dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw ValidationError("override key '" + key + "' has an empty component");
        if (!node->is_object()) *node = Json::object();
        if (dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        node = &(*node)[part];
        start = dot + 1;
    }
}

Json read_config_json(const fs::path& path) {
    Json j = read_json_file(path);
    if (!j.is_object()) throw ValidationError(path.string() + ": config must be a JSON object");
    // Anchor relative paths to the config file's directory.
    if (auto it = j.find("paths"); it != j.end() && it->is_object()) {
        const fs::path base = path.parent_path();
        for (auto p = it->begin(); p != it->end(); ++p) {
            if (p->is_string() && !p->get<std::string>().empty()) {
                *p = resolve(p->get<std::string>(), base).string();
            }
        }
    }
    return j;
}

void validate_config(const Config& c) {
    auto fail = [](const std::string& what) { throw ValidationError("config: " + what); };
    if (c.transfer.min_area < 0) fail("transfer.min_area must be >= 0");
    if (c.frames.stride < 1 || c.frames.count < 1 || c.frames.offset < 0) {
        fail("frames needs stride >= 1, count >= 1, offset >= 0");
    }
    if (c.disocclusion.mode != "dense" && c.disocclusion.mode != "hull" && c.disocclusion.mode != "extreme") {
        fail("disocclusion.mode must be dense, hull or extreme");
    }
    c.disocclusion.dense.validate();
    c.pseudo.validate();
    if (c.recall.k < 1) fail("recall.k must be >= 1");
    if (c.kid.subset_size < 2 || c.kid.n_subsets < 1) fail("kid needs subset_size >= 2 and n_subsets >= 1");
    if (!(c.curation.remove_fraction >= 0.0 && c.curation.remove_fraction <= 1.0)) {
        fail("curation.remove_fraction must lie in [0, 1]");
    }
    if (c.curation.crops.crop_width < 1 || c.curation.crops.crop_height < 1 || c.curation.crops.count < 0) {
        fail("curation crop size must be positive and n_crops >= 0");
    }
    if (c.curation.max_area < 1 || c.curation.multiple < 1 || c.curation.clip_frames < 1) {
        fail("curation.max_area, multiple and clip_frames must be positive");
    }
    if (c.manifest.epochs < 1) fail("manifest.epochs must be >= 1");
}

}  // namespace stamp
