// Writes the synthetic toy fixture set used by the end-to-end tests and the
// README walkthrough. Output is deterministic.
//
//   make_toy_fixtures <output-dir>
//
// Scene: real image 1 (64x48) holds two objects. Clip "toyclip" (36 frames)
// pans the camera so the content drifts left by t/2 px per frame, revealing
// new content on the right. Object 1 slides out of view at frame 21; object 2
// stays visible. With 8 frames at stride 5, object 1 is empty at frames 25,
// 30 and 35, so transfer yields 2 * 8 - 3 = 13 boxes.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "stamp/coco_io.hpp"
#include "stamp/image.hpp"
#include "stamp/rng.hpp"
#include "stamp/tensor_io.hpp"
#include "stamp/transfer.hpp"

namespace fs = std::filesystem;
using namespace stamp;

namespace {

constexpr int kWidth = 64;
constexpr int kHeight = 48;
constexpr int kFrames = 36;

struct Rect {
    int col0, row0, col1, row1;  // inclusive
};

Bitmap rect_bitmap(Rect r) {
    Bitmap b(kHeight, kWidth);
    for (int row = std::max(0, r.row0); row <= std::min(kHeight - 1, r.row1); ++row) {
        for (int col = std::max(0, r.col0); col <= std::min(kWidth - 1, r.col1); ++col) b.set(row, col, true);
    }
    return b;
}

// Object 1 moves 1 px/frame, object 2 one px every 4 frames.
Rect object_at(int object, int t) {
    if (object == 1) return {3 - t, 10, 20 - t, 19};
    return {40 - t / 4, 28, 55 - t / 4, 39};
}

double pan(int t) { return 0.5 * t; }

Dataset make_dataset() {
    Dataset ds;
    ds.categories = {{1, "person", {{"supercategory", "person"}}}, {2, "car", {{"supercategory", "vehicle"}}}};
    for (ImageId id = 1; id <= 3; ++id) {
        char name[32];
        std::snprintf(name, sizeof name, "real_%04lld.png", static_cast<long long>(id));
        ds.images.push_back({id, name, kWidth, kHeight, std::nullopt, {{"license", 1}}});
    }
    for (int object = 1; object <= 2; ++object) {
        const BinaryMask mask = rle_encode(rect_bitmap(object_at(object, 0)));
        Annotation a{.id = object, .image_id = 1, .category_id = object, .bbox = *bbox_from_mask(mask)};
        a.segmentation = mask;
        a.extra = {{"area", static_cast<double>(mask_area(mask))}, {"iscrowd", 0}};
        ds.annotations.push_back(a);
    }
    Annotation other{.id = 3, .image_id = 2, .category_id = 1, .bbox = BBox(5, 6, 20, 30)};
    other.extra = {{"area", 600.0}, {"iscrowd", 0}};
    ds.annotations.push_back(other);
    ds.extra = {{"info", {{"description", "stamp toy fixture"}, {"version", "1"}}},
                {"licenses", {{{"id", 1}, {"name", "CC0"}}}}};
    return ds;
}

ClipMaskSet make_clip() {
    ClipMaskSet clip{"toyclip", 1, kFrames, kWidth, kHeight, {}, {}};
    for (int t = 0; t < kFrames; ++t) {
        char name[32];
        std::snprintf(name, sizeof name, "frame_%05d.png", t);
        clip.frame_files.push_back(name);
    }
    for (int object = 1; object <= 2; ++object) {
        ClipObject obj{object, {}};
        for (int t = 0; t < kFrames; ++t) obj.masks.push_back(rle_encode(rect_bitmap(object_at(object, t))));
        clip.objects.push_back(std::move(obj));
    }
    return clip;
}

FlowField make_flow() {
    FlowField f;
    f.frames = kFrames;
    f.height = kHeight;
    f.width = kWidth;
    const std::size_t pixels = static_cast<std::size_t>(kFrames) * kHeight * kWidth;
    f.flow.resize(2 * pixels);
    f.vis.resize(pixels);
    f.conf.resize(pixels);
    for (int t = 0; t < kFrames; ++t) {
        for (int r = 0; r < kHeight; ++r) {
            for (int c = 0; c < kWidth; ++c) {
                const std::size_t i = f.pixel_index(t, r, c);
                f.flow[2 * i] = static_cast<float>(-pan(t));
                f.flow[2 * i + 1] = 0.0f;
                const bool inside = c - pan(t) >= 0.0;
                f.vis[i] = inside ? 1.0f : 0.0f;
                f.conf[i] = inside ? 0.95f : 0.05f;
            }
        }
    }
    return f;
}

TrackGrid make_tracks() {
    constexpr int kGrid = 16;
    TrackGrid g{kFrames, kGrid * kGrid, {}};
    for (int t = 0; t < kFrames; ++t) {
        for (int j = 0; j < kGrid; ++j) {
            for (int i = 0; i < kGrid; ++i) {
                const float x = static_cast<float>((i + 0.5) * kWidth / kGrid - pan(t));
                const float y = static_cast<float>((j + 0.5) * kHeight / kGrid);
                g.records.push_back({x, y, x >= 0.0f});
            }
        }
    }
    return g;
}

RgbImage make_frame(int t) {
    RgbImage img(kWidth, kHeight);
    for (int r = 0; r < kHeight; ++r) {
        for (int c = 0; c < kWidth; ++c) {
            const int u = static_cast<int>(c + pan(t));
            const std::size_t i = (static_cast<std::size_t>(r) * kWidth + c) * 3;
            img.pixels[i] = static_cast<std::uint8_t>(40 + 2 * u);
            img.pixels[i + 1] = static_cast<std::uint8_t>(60 + 3 * r);
            img.pixels[i + 2] = static_cast<std::uint8_t>((u / 8 + r / 8) % 2 ? 200 : 90);
        }
    }
    return img;
}

EmbeddingMatrix make_embeddings(const char* prefix, int rows, int dim, double offset, std::uint64_t seed) {
    SplitMix64 rng(seed);
    EmbeddingMatrix e;
    e.dim = dim;
    for (int r = 0; r < rows; ++r) {
        char id[32];
        std::snprintf(id, sizeof id, "%s_%03d", prefix, r);
        e.ids.push_back(id);
        for (int d = 0; d < dim; ++d) e.values.push_back(static_cast<float>(offset + 2.0 * rng.uniform_unit() - 1.0));
    }
    return e;
}

// Synthetic image ids are 4..11 (frames 0, 5, ..., 35) after transfer.
Json make_predictions() {
    return Json::array({
        // frame 35 (id 11): revealed strip on the right, kept
        {{"image_id", 11}, {"category_id", 2}, {"bbox", {50, 4, 12, 12}}, {"score", 0.9}},
        // same place, below the confidence threshold
        {{"image_id", 11}, {"category_id", 2}, {"bbox", {50, 20, 12, 12}}, {"score", 0.6}},
        // duplicate of object 2's transferred box (cols 32..47, rows 28..39)
        {{"image_id", 11}, {"category_id", 2}, {"bbox", {32, 28, 16, 12}}, {"score", 0.95}},
        // tracked (valid) region on the left, rejected by the area ratio
        {{"image_id", 11}, {"category_id", 1}, {"bbox", {4, 4, 10, 10}}, {"score", 0.85}},
        // frame 30 (id 10): revealed region, kept
        {{"image_id", 10}, {"category_id", 1}, {"bbox", {54, 30, 9, 10}}, {"score", 0.75}},
        // boundary confidence, rejected
        {{"image_id", 10}, {"category_id", 1}, {"bbox", {54, 5, 9, 10}}, {"score", 0.7}},
        // real image without a validity mask, ignored
        {{"image_id", 2}, {"category_id", 1}, {"bbox", {40, 10, 10, 10}}, {"score", 0.99}},
    });
}

Json make_config() {
    return {
        {"paths",
         {{"dataset", "dataset.json"},
          {"clips_dir", "clips"},
          {"flows_dir", "flows"},
          {"tracks_dir", "tracks"},
          {"frames_dir", "frames"},
          {"predictions", "predictions.json"},
          {"embeddings_train", "embeddings/train.emb"},
          {"embeddings_val", "embeddings/val.emb"},
          {"scores", "scores.json"}}},
        {"frames", {{"stride", 5}, {"count", 8}, {"offset", 0}}},
        {"disocclusion", {{"mode", "dense"}, {"tau_vis", 0.9}, {"tau_conf", 0.1}, {"sigma", 1.5}, {"tau_w", 0.5}}},
        {"pseudo", {{"conf_thr", 0.7}, {"area_ratio_thr", 0.5}, {"iou_thr", 0.5}}},
        {"recall", {{"k", 3}}},
        {"kid", {{"subset_size", 10}, {"n_subsets", 8}, {"seed", 7}}},
        {"curation", {{"remove_fraction", 0.25}, {"clip_frames", 36}, {"crops_enabled", false}}},
        {"manifest", {{"epochs", 8}, {"seed", 7}, {"balanced", true}}},
    };
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_toy_fixtures <output-dir>\n";
        return 2;
    }
    const fs::path root = argv[1];
    try {
        save_coco(make_dataset(), root / "dataset.json");
        const ClipMaskSet clip = make_clip();
        save_clip(root / "clips" / clip.clip_id, clip);
        save_flow(root / "flows" / "toyclip.flw", make_flow());
        save_tracks(root / "tracks" / "toyclip.trk", make_tracks());
        for (int t = 0; t < kFrames; t += 5) {
            write_png(root / "frames" / clip.clip_id / clip.frame_files[t], make_frame(t));
        }
        write_json_file(root / "predictions.json", make_predictions());
        const auto train = make_embeddings("train", 24, 8, 0.0, 11);
        const auto val = make_embeddings("val", 12, 8, 0.2, 12);
        save_embeddings(root / "embeddings" / "train.emb", embedding_sidecar_for(root / "embeddings" / "train.emb"), train);
        save_embeddings(root / "embeddings" / "val.emb", embedding_sidecar_for(root / "embeddings" / "val.emb"), val);
        ScoreTable scores;
        SplitMix64 rng(5);
        for (int id = 4; id <= 11; ++id) scores.scores[std::to_string(id)] = 0.2 + 0.1 * rng.uniform_unit() + 0.01 * id;
        save_scores(root / "scores.json", scores);
        write_json_file(root / "config.json", make_config());
    } catch (const std::exception& e) {
        std::cerr << "make_toy_fixtures: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
