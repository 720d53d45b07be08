#include "stamp/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "stamp/coco_io.hpp"
#include "stamp/error.hpp"
#include "stamp/image.hpp"
#include "stamp/manifest.hpp"
#include "stamp/validate.hpp"

namespace stamp {

namespace fs = std::filesystem;

namespace {

// Hash of a directory: SHA-256 over "relative-path\0file-hash\n" lines in path order.
std::string hash_path(const fs::path& path) {
    if (!fs::is_directory(path)) return sha256_file(path);
    std::vector<fs::path> files;
    for (const auto& entry : fs::recursive_directory_iterator(path)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::string listing;
    for (const auto& f : files) {
        listing += fs::relative(f, path).generic_string();
        listing += '\0';
        listing += sha256_file(f);
        listing += '\n';
    }
    return sha256_hex(listing.data(), listing.size());
}

const fs::path& require_input(const fs::path& path, const char* key) {
    if (path.empty()) throw ValidationError(std::string("config paths.") + key + " is not set");
    std::error_code ec;
    if (!fs::exists(path, ec)) throw IoError(std::string("paths.") + key + ": '" + path.string() + "' does not exist");
    return path;
}

class RunReport {
public:
    RunReport(std::string stage, fs::path out_dir) : stage_(std::move(stage)), out_dir_(std::move(out_dir)) {
        std::error_code ec;
        fs::create_directories(out_dir_, ec);
        if (ec) throw IoError("cannot create output directory '" + out_dir_.string() + "': " + ec.message());
    }

    void input(const std::string& name, const fs::path& path) {
        json_["inputs"][name] = {{"path", path.generic_string()}, {"sha256", hash_path(path)}};
    }
    void output(const std::string& relative) {
        json_["outputs"][relative] = hash_path(out_dir_ / relative);
    }
    void param(const std::string& name, Json value) { json_["params"][name] = std::move(value); }
    void count(const std::string& name, Json value) { json_["counts"][name] = std::move(value); }
    void warn(const std::string& message) { json_["warnings"].push_back(message); }
    Json& raw() { return json_; }
    const fs::path& out_dir() const { return out_dir_; }

    Json finish() {
        json_["stage"] = stage_;
        for (const char* key : {"inputs", "outputs", "params", "counts"}) {
            if (!json_.contains(key)) json_[key] = Json::object();
        }
        if (!json_.contains("warnings")) json_["warnings"] = Json::array();
        write_json_file(out_dir_ / (stage_ + "_report.json"), json_);
        return json_;
    }

private:
    std::string stage_;
    fs::path out_dir_;
    Json json_ = Json::object();
};

Json dense_params_json(const DenseMaskParams& p) {
    return {{"tau_vis", p.vis_threshold}, {"tau_conf", p.conf_threshold}, {"sigma", p.sigma}, {"tau_w", p.weight_threshold}};
}

std::string mask_file_name(ImageId id) { return "masks/" + std::to_string(id) + ".json"; }

}  // namespace

Json run_validate(const Config& config, const std::vector<fs::path>& extra, const fs::path& out_dir) {
    RunReport report("validate", out_dir);
    std::vector<fs::path> targets;
    const auto& p = config.paths;
    for (const fs::path* path : {&p.dataset, &p.predictions, &p.scores}) {
        if (!path->empty()) targets.push_back(*path);
    }
    if (!p.clips_dir.empty()) {
        for (const auto& dir : list_clip_dirs(p.clips_dir)) targets.push_back(dir);
    }
    for (const fs::path* dir : {&p.flows_dir, &p.tracks_dir}) {
        if (dir->empty()) continue;
        if (!fs::is_directory(*dir)) throw IoError("'" + dir->string() + "' is not a directory");
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(*dir)) {
            if (entry.is_regular_file()) files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        targets.insert(targets.end(), files.begin(), files.end());
    }
    for (const fs::path* emb : {&p.embeddings_train, &p.embeddings_val}) {
        if (!emb->empty()) targets.push_back(*emb);
    }
    targets.insert(targets.end(), extra.begin(), extra.end());

    Json files = Json::array();
    bool ok = true;
    std::size_t failed = 0;
    for (const auto& t : targets) {
        ValidationReport r = validate_any(t);
        ok = ok && r.ok();
        failed += r.ok() ? 0 : 1;
        files.push_back(r.to_json());
    }
    report.raw()["ok"] = ok;
    report.raw()["files"] = std::move(files);
    report.count("files", targets.size());
    report.count("failed", failed);
    return report.finish();
}

Json run_transfer(const Config& config, const fs::path& out_dir) {
    RunReport report("transfer", out_dir);
    const auto& dataset_path = require_input(config.paths.dataset, "dataset");
    const auto& clips_dir = require_input(config.paths.clips_dir, "clips_dir");
    report.input("dataset", dataset_path);
    report.input("clips_dir", clips_dir);

    Dataset ds = load_coco(dataset_path);
    std::vector<ClipMaskSet> clips;
    for (const auto& dir : list_clip_dirs(clips_dir)) clips.push_back(load_clip(dir));
    std::sort(clips.begin(), clips.end(), [](const auto& a, const auto& b) { return a.clip_id < b.clip_id; });

    TransferStats stats;
    Json selected = Json::object();
    for (const auto& clip : clips) {
        const auto frames = select_frames(clip.frame_count, config.frames.stride, config.frames.count,
                                          config.frames.offset);
        selected[clip.clip_id] = frames;
        ds = transfer_annotations(ds, clip, frames, config.transfer, &stats);
    }
    save_coco(ds, out_dir / "dataset.transferred.json");
    report.output("dataset.transferred.json");

    report.param("frames", {{"stride", config.frames.stride}, {"count", config.frames.count},
                            {"offset", config.frames.offset}});
    report.param("min_area", config.transfer.min_area);
    report.count("clips", clips.size());
    report.count("selected_frames", selected);
    report.count("synthetic_images", stats.images_added);
    report.count("transferred_annotations", stats.annotations_added);
    report.count("empty_masks", stats.empty_masks);
    report.count("below_min_area", stats.below_min_area);
    return report.finish();
}

Json run_disocclude(const Config& config, const fs::path& out_dir) {
    RunReport report("disocclude", out_dir);
    const auto& dataset_path = require_input(config.paths.dataset, "dataset");
    report.input("dataset", dataset_path);
    const std::string& mode = config.disocclusion.mode;
    const bool dense = mode == "dense";
    const fs::path& source_dir = dense ? require_input(config.paths.flows_dir, "flows_dir")
                                       : require_input(config.paths.tracks_dir, "tracks_dir");
    report.input(dense ? "flows_dir" : "tracks_dir", source_dir);
    const bool have_frames = !config.paths.frames_dir.empty();
    if (have_frames) report.input("frames_dir", require_input(config.paths.frames_dir, "frames_dir"));

    const Dataset ds = load_coco(dataset_path);
    std::vector<const ImageRecord*> synthetic;
    for (const auto& im : ds.images) {
        if (im.is_synthetic()) synthetic.push_back(&im);
    }
    std::sort(synthetic.begin(), synthetic.end(), [](auto* a, auto* b) { return a->id < b->id; });

    std::map<std::string, FlowField> flows;
    std::map<std::string, TrackGrid> tracks;
    std::size_t invalid_pixels = 0;
    std::size_t total_pixels = 0;
    std::size_t frames_masked = 0;
    for (const ImageRecord* im : synthetic) {
        const std::string& clip = im->synthetic->clip_id;
        ValidityMask mask;
        if (dense) {
            auto it = flows.find(clip);
            if (it == flows.end()) it = flows.emplace(clip, load_flow(source_dir / (clip + ".flw"))).first;
            const FlowField& flow = it->second;
            if (flow.width != im->width || flow.height != im->height) {
                throw ValidationError("flow for clip '" + clip + "' is " + std::to_string(flow.width) + "x" +
                                      std::to_string(flow.height) + " but image " + std::to_string(im->id) +
                                      " is " + std::to_string(im->width) + "x" + std::to_string(im->height));
            }
            mask = dense_validity_mask(flow, im->synthetic->frame_index, config.disocclusion.dense);
        } else {
            auto it = tracks.find(clip);
            if (it == tracks.end()) it = tracks.emplace(clip, load_tracks(source_dir / (clip + ".trk"))).first;
            mask = track_validity_mask(it->second, im->synthetic->frame_index, im->width, im->height,
                                       mode == "hull" ? PolygonMode::ConvexHull : PolygonMode::ExtremePoints);
        }
        save_mask_file(out_dir / mask_file_name(im->id), rle_encode(mask));
        total_pixels += mask.size();
        invalid_pixels += mask.size() - mask.count();

        if (have_frames) {
            const fs::path frame = config.paths.frames_dir / im->file_name;
            if (fs::exists(frame)) {
                write_png(out_dir / "masked" / im->file_name, apply_validity_mask(read_png(frame), mask));
                ++frames_masked;
            } else {
                report.warn("no frame image for synthetic image " + std::to_string(im->id) + " at " +
                            frame.generic_string());
            }
        }
    }
    if (!synthetic.empty()) report.output("masks");
    if (frames_masked > 0) report.output("masked");

    report.param("mode", mode);
    if (dense) report.param("dense", dense_params_json(config.disocclusion.dense));
    report.count("synthetic_images", synthetic.size());
    report.count("masks_written", synthetic.size());
    report.count("frames_masked", frames_masked);
    report.count("invalid_pixels", invalid_pixels);
    report.count("total_pixels", total_pixels);
    return report.finish();
}

Json run_pseudo(const Config& config, const fs::path& out_dir) {
    RunReport report("pseudo", out_dir);
    const auto& dataset_path = require_input(config.paths.dataset, "dataset");
    const auto& predictions_path = require_input(config.paths.predictions, "predictions");
    const auto& masks_dir = require_input(config.paths.masks_dir, "masks_dir");
    report.input("dataset", dataset_path);
    report.input("predictions", predictions_path);
    report.input("masks_dir", masks_dir);

    const Dataset ds = load_coco(dataset_path);
    const auto predictions = load_predictions(predictions_path);
    std::map<ImageId, std::vector<Prediction>> by_image;
    for (const auto& p : predictions) {
        if (!ds.find_image(p.image_id)) {
            throw ValidationError(predictions_path.string() + ": prediction references missing image " +
                                  std::to_string(p.image_id));
        }
        by_image[p.image_id].push_back(p);
    }

    std::vector<Annotation> pseudo;
    std::size_t considered = 0;
    std::size_t images_with_masks = 0;
    for (const auto& [image_id, preds] : by_image) {
        const fs::path mask_path = masks_dir / (std::to_string(image_id) + ".json");
        if (!fs::exists(mask_path)) continue;
        ++images_with_masks;
        considered += preds.size();
        const ValidityMask mask(rle_decode(load_mask_file(mask_path)));
        std::vector<Annotation> gt;
        for (const auto& a : ds.annotations) {
            if (a.image_id == image_id && a.source != AnnotationSource::Pseudo) gt.push_back(a);
        }
        auto kept = select_pseudo_labels(*ds.find_image(image_id), preds, gt, mask, config.pseudo);
        pseudo.insert(pseudo.end(), kept.begin(), kept.end());
    }
    const Dataset merged = merge_pseudo(ds, pseudo);
    save_coco(merged, out_dir / "dataset.pseudo.json");
    report.output("dataset.pseudo.json");

    Json labels = dataset_to_json(Dataset{{}, {merged.annotations.end() - static_cast<std::ptrdiff_t>(pseudo.size()),
                                               merged.annotations.end()}, {}, Json::object()})
                      .at("annotations");
    write_json_file(out_dir / "pseudo_labels.json", labels);
    report.output("pseudo_labels.json");

    report.param("pseudo", {{"conf_thr", config.pseudo.conf_threshold},
                            {"area_ratio_thr", config.pseudo.area_ratio_threshold},
                            {"iou_thr", config.pseudo.iou_threshold}});
    report.count("predictions", predictions.size());
    report.count("images_with_masks", images_with_masks);
    report.count("predictions_considered", considered);
    report.count("pseudo_labels", pseudo.size());
    return report.finish();
}

Json run_coverage(const Config& config, const fs::path& out_dir) {
    RunReport report("coverage", out_dir);
    const auto& train = require_input(config.paths.embeddings_train, "embeddings_train");
    const auto& val = require_input(config.paths.embeddings_val, "embeddings_val");
    report.input("embeddings_train", train);
    report.input("embeddings_train_ids", embedding_sidecar_for(train));
    report.input("embeddings_val", val);
    report.input("embeddings_val_ids", embedding_sidecar_for(val));

    const EmbeddingMatrix d = load_embeddings(train, embedding_sidecar_for(train));
    const EmbeddingMatrix u = load_embeddings(val, embedding_sidecar_for(val));
    const double r = recall(u, d, config.recall);
    const KidResult k = kid(d, u, config.kid);

    const Json params = {{"k", config.recall.k},
                         {"metric", "l2"},
                         {"kid_subset_size", config.kid.subset_size},
                         {"kid_n_subsets", config.kid.n_subsets},
                         {"kid_seed", config.kid.seed}};
    write_json_file(out_dir / "coverage.json",
                    {{"recall", r}, {"kid_mean", k.mean}, {"kid_std", k.std}, {"params", params}});
    report.output("coverage.json");
    report.param("coverage", params);
    report.count("train_rows", d.rows());
    report.count("val_rows", u.rows());
    report.count("recall", r);
    report.count("kid_mean", k.mean);
    report.count("kid_std", k.std);
    return report.finish();
}

Json run_curate(const Config& config, const fs::path& out_dir) {
    RunReport report("curate", out_dir);
    const auto& cu = config.curation;

    const auto frames = select_frames(cu.clip_frames, config.frames.stride, config.frames.count, config.frames.offset);
    write_json_file(out_dir / "frames.json", frames);
    report.output("frames.json");
    report.count("selected_frames", frames.size());

    if (!config.paths.dataset.empty()) {
        const auto& dataset_path = require_input(config.paths.dataset, "dataset");
        report.input("dataset", dataset_path);
        Dataset ds = load_coco(dataset_path);

        Json resize = Json::array();
        for (const auto& im : ds.images) {
            if (im.is_synthetic()) continue;
            Json entry = to_json(plan_resize(im.width, im.height, cu.max_area, cu.multiple));
            entry["image_id"] = im.id;
            resize.push_back(std::move(entry));
        }
        write_json_file(out_dir / "resize_plan.json", resize);
        report.output("resize_plan.json");
        report.count("resize_plans", resize.size());

        if (cu.crops_enabled) {
            Json crops = Json::array();
            for (const auto& plan : plan_dataset_crops(ds, cu.crops, cu.seed)) crops.push_back(to_json(plan));
            write_json_file(out_dir / "crops.json", crops);
            report.output("crops.json");
            report.count("crop_plans", crops.size());
        }

        if (!config.paths.scores.empty()) {
            const auto& scores_path = require_input(config.paths.scores, "scores");
            report.input("scores", scores_path);
            const ScoreTable scores = load_scores(scores_path);
            std::vector<const ImageRecord*> synthetic;
            for (const auto& im : ds.images) {
                if (im.is_synthetic()) synthetic.push_back(&im);
            }
            std::sort(synthetic.begin(), synthetic.end(), [](auto* a, auto* b) { return a->id < b->id; });
            std::vector<std::string> ids;
            for (auto* im : synthetic) ids.push_back(std::to_string(im->id));
            const auto kept = score_filter(scores, ids, cu.remove_fraction);

            std::set<ImageId> removed;
            for (auto* im : synthetic) removed.insert(im->id);
            Json kept_json = Json::array();
            for (const auto& id : kept) {
                removed.erase(std::stoll(id));
                kept_json.push_back(std::stoll(id));
            }
            write_json_file(out_dir / "kept_ids.json", kept_json);
            report.output("kept_ids.json");

            Dataset filtered = ds;
            std::erase_if(filtered.images, [&](const ImageRecord& im) { return removed.contains(im.id); });
            std::erase_if(filtered.annotations, [&](const Annotation& a) { return removed.contains(a.image_id); });
            save_coco(filtered, out_dir / "dataset.filtered.json");
            report.output("dataset.filtered.json");
            report.count("synthetic_scored", ids.size());
            report.count("synthetic_removed", removed.size());
        }
    }

    report.param("curation", config_to_json(config).at("curation"));
    report.param("frames", {{"stride", config.frames.stride}, {"count", config.frames.count},
                            {"offset", config.frames.offset}});
    return report.finish();
}

Json run_manifest(const Config& config, const fs::path& out_dir) {
    RunReport report("manifest", out_dir);
    const auto& dataset_path = require_input(config.paths.dataset, "dataset");
    report.input("dataset", dataset_path);
    const Dataset ds = load_coco(dataset_path);
    const auto mode = config.manifest.balanced ? SamplingMode::Balanced : SamplingMode::Concatenated;
    const Manifest m = build_manifest(ds, config.manifest.epochs, config.manifest.seed, mode);
    validate_manifest(m, ds);
    emit_manifest(m, out_dir / "manifest.ndjson");
    report.output("manifest.ndjson");

    Json real = Json::array();
    Json synthetic = Json::array();
    for (const auto& epoch : m.epochs) {
        const auto n_real = std::count_if(epoch.begin(), epoch.end(),
                                          [](const ManifestEntry& e) { return e.provenance == Provenance::Real; });
        real.push_back(n_real);
        synthetic.push_back(static_cast<std::ptrdiff_t>(epoch.size()) - n_real);
    }
    if (m.synthetic_pool_empty) report.warn("dataset has no synthetic images; epochs contain real images only");
    report.param("manifest", {{"epochs", config.manifest.epochs},
                              {"seed", config.manifest.seed},
                              {"mode", config.manifest.balanced ? "balanced" : "concatenated"}});
    report.count("epochs", m.epochs.size());
    report.count("real_per_epoch", real);
    report.count("synthetic_per_epoch", synthetic);
    report.count("synthetic_pool_empty", m.synthetic_pool_empty);
    return report.finish();
}

}  // namespace stamp
