#include "stamp/transfer.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "stamp/error.hpp"

namespace stamp {

namespace fs = std::filesystem;

namespace {

void check_clip(const Dataset& ds, const ClipMaskSet& clip) {
    const std::string tag = "clip '" + clip.clip_id + "'";
    const ImageRecord* source = ds.find_image(clip.source_image_id);
    if (!source) {
        throw ValidationError(tag + " references missing source image " + std::to_string(clip.source_image_id));
    }
    if (source->is_synthetic()) {
        throw ValidationError(tag + " is conditioned on synthetic image " + std::to_string(source->id));
    }
    if (clip.frame_count <= 0 || clip.width <= 0 || clip.height <= 0) {
        throw ValidationError(tag + " has empty frame count or frame size");
    }
    if (!clip.frame_files.empty() && clip.frame_files.size() != static_cast<std::size_t>(clip.frame_count)) {
        throw ValidationError(tag + " lists " + std::to_string(clip.frame_files.size()) + " frame files for " +
                              std::to_string(clip.frame_count) + " frames");
    }
    for (const auto& obj : clip.objects) {
        const Annotation* ann = ds.find_annotation(obj.source_annotation_id);
        if (!ann) {
            throw ValidationError(tag + " tracks unknown source annotation " + std::to_string(obj.source_annotation_id));
        }
        if (ann->image_id != clip.source_image_id || ann->source != AnnotationSource::GroundTruth) {
            throw ValidationError(tag + ": annotation " + std::to_string(ann->id) +
                                  " is not a ground-truth annotation of source image " +
                                  std::to_string(clip.source_image_id));
        }
        if (obj.masks.size() != static_cast<std::size_t>(clip.frame_count)) {
            throw ValidationError(tag + ": object " + std::to_string(obj.source_annotation_id) + " has " +
                                  std::to_string(obj.masks.size()) + " masks for " +
                                  std::to_string(clip.frame_count) + " frames");
        }
        for (std::size_t t = 0; t < obj.masks.size(); ++t) {
            if (obj.masks[t].height != clip.height || obj.masks[t].width != clip.width) {
                std::ostringstream msg;
                msg << tag << ": mask of object " << obj.source_annotation_id << " at frame " << t << " is "
                    << obj.masks[t].width << "x" << obj.masks[t].height << ", frames are " << clip.width << "x"
                    << clip.height;
                throw ValidationError(msg.str());
            }
        }
    }
}

}  // namespace

std::string synthetic_file_name(const ClipMaskSet& clip, int frame_index) {
    if (!clip.frame_files.empty()) return clip.clip_id + "/" + clip.frame_files[frame_index];
    char buf[32];
    std::snprintf(buf, sizeof buf, "frame_%05d.png", frame_index);
    return clip.clip_id + "/" + buf;
}

Dataset transfer_annotations(const Dataset& ds, const ClipMaskSet& clip, const std::vector<int>& frame_indices,
                             const TransferOptions& options, TransferStats* stats) {
    check_clip(ds, clip);
    std::set<int> seen;
    for (int t : frame_indices) {
        if (t < 0 || t >= clip.frame_count) {
            throw ValidationError("clip '" + clip.clip_id + "': frame index " + std::to_string(t) +
                                  " out of range [0, " + std::to_string(clip.frame_count) + ")");
        }
        if (!seen.insert(t).second) {
            throw ValidationError("clip '" + clip.clip_id + "': frame index " + std::to_string(t) + " selected twice");
        }
    }

    Dataset out = ds;
    ImageId next_image = ds.max_image_id();
    AnnotationId next_annotation = ds.max_annotation_id();
    TransferStats local;
    for (int t : frame_indices) {
        ImageRecord im;
        im.id = ++next_image;
        im.file_name = synthetic_file_name(clip, t);
        im.width = clip.width;
        im.height = clip.height;
        im.synthetic = SyntheticOrigin{clip.source_image_id, clip.clip_id, t};
        out.images.push_back(im);
        ++local.images_added;

        for (const auto& obj : clip.objects) {
            const BinaryMask& mask = obj.masks[t];
            const auto box = bbox_from_mask(mask);
            if (!box) {
                ++local.empty_masks;
                continue;
            }
            if (box->area() < options.min_area) {
                ++local.below_min_area;
                continue;
            }
            const Annotation& src = *ds.find_annotation(obj.source_annotation_id);
            Annotation a{.id = ++next_annotation, .image_id = im.id, .category_id = src.category_id, .bbox = *box};
            a.source = AnnotationSource::Transferred;
            a.extra = {{"area", static_cast<double>(mask_area(mask))}, {"iscrowd", 0}};
            out.annotations.push_back(std::move(a));
            ++local.annotations_added;
        }
    }
    if (stats) {
        stats->images_added += local.images_added;
        stats->annotations_added += local.annotations_added;
        stats->empty_masks += local.empty_masks;
        stats->below_min_area += local.below_min_area;
    }
    return out;
}

Dataset transfer_clips(const Dataset& ds, std::vector<ClipMaskSet> clips, const std::vector<int>& frame_indices,
                       const TransferOptions& options, TransferStats* stats) {
    std::sort(clips.begin(), clips.end(), [](const ClipMaskSet& a, const ClipMaskSet& b) { return a.clip_id < b.clip_id; });
    for (std::size_t i = 1; i < clips.size(); ++i) {
        if (clips[i].clip_id == clips[i - 1].clip_id) {
            throw ValidationError("duplicate clip id '" + clips[i].clip_id + "'");
        }
    }
    Dataset out = ds;
    for (const auto& clip : clips) out = transfer_annotations(out, clip, frame_indices, options, stats);
    return out;
}

ClipMaskSet load_clip(const fs::path& clip_dir) {
    const fs::path manifest_path = clip_dir / kClipManifestName;
    const Json j = read_json_file(manifest_path);
    ClipMaskSet clip;
    try {
        clip.clip_id = j.at("clip_id").get<std::string>();
        clip.source_image_id = j.at("source_image_id").get<ImageId>();
        clip.frame_count = j.at("frame_count").get<int>();
        clip.width = j.at("width").get<int>();
        clip.height = j.at("height").get<int>();
        if (j.contains("frame_files")) clip.frame_files = j.at("frame_files").get<std::vector<std::string>>();
        for (const Json& id : j.at("objects")) {
            clip.objects.push_back({id.get<AnnotationId>(), {}});
        }
    } catch (const Json::exception& e) {
        throw ValidationError(manifest_path.string() + ": " + e.what());
    }
    if (clip.frame_count <= 0) throw ValidationError(manifest_path.string() + ": frame_count must be positive");
    for (auto& obj : clip.objects) {
        obj.masks.reserve(clip.frame_count);
        for (int t = 0; t < clip.frame_count; ++t) {
            const fs::path mask_path = clip_dir / std::to_string(obj.source_annotation_id) / (std::to_string(t) + ".json");
            obj.masks.push_back(load_mask_file(mask_path));
        }
    }
    return clip;
}

void save_clip(const fs::path& clip_dir, const ClipMaskSet& clip) {
    Json objects = Json::array();
    for (const auto& obj : clip.objects) {
        objects.push_back(obj.source_annotation_id);
        for (std::size_t t = 0; t < obj.masks.size(); ++t) {
            save_mask_file(clip_dir / std::to_string(obj.source_annotation_id) / (std::to_string(t) + ".json"),
                           obj.masks[t]);
        }
    }
    Json j = {{"clip_id", clip.clip_id},         {"source_image_id", clip.source_image_id},
              {"frame_count", clip.frame_count}, {"width", clip.width},
              {"height", clip.height},           {"objects", std::move(objects)}};
    if (!clip.frame_files.empty()) j["frame_files"] = clip.frame_files;
    write_json_file(clip_dir / kClipManifestName, j);
}

std::vector<fs::path> list_clip_dirs(const fs::path& clips_dir) {
    std::error_code ec;
    if (!fs::is_directory(clips_dir, ec)) throw IoError("clips directory '" + clips_dir.string() + "' does not exist");
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(clips_dir)) {
        if (entry.is_directory() && fs::exists(entry.path() / kClipManifestName)) dirs.push_back(entry.path());
    }
    std::sort(dirs.begin(), dirs.end());
    return dirs;
}

}  // namespace stamp
