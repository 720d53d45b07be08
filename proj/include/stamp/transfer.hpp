#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stamp/dataset.hpp"
#include "stamp/rle.hpp"

namespace stamp {

/// Mask track of one ground-truth object through a generated clip.
struct ClipObject {
    AnnotationId source_annotation_id = 0;
    std::vector<BinaryMask> masks;  // one per clip frame
};

/// Segmentation masks for every tracked object of one generated clip.
struct ClipMaskSet {
    std::string clip_id;
    ImageId source_image_id = 0;
    int frame_count = 0;
    int width = 0;
    int height = 0;
    std::vector<std::string> frame_files;  // optional, one per frame, relative to the clip directory
    std::vector<ClipObject> objects;
};

struct TransferOptions {
    double min_area = 1.0;  // px^2; smaller transferred boxes are dropped
};

struct TransferStats {
    std::size_t images_added = 0;
    std::size_t annotations_added = 0;
    std::size_t empty_masks = 0;
    std::size_t below_min_area = 0;
};

// Appends one synthetic image per selected frame (ids continue from the
// dataset's maximum) and, for each object whose mask at that frame is
// nonempty with tight-box area >= min_area, a transferred annotation carrying
// the source annotation's category. Existing entries are left untouched.
Dataset transfer_annotations(const Dataset& ds, const ClipMaskSet& clip, const std::vector<int>& frame_indices,
                             const TransferOptions& options = {}, TransferStats* stats = nullptr);

/// Transfers several clips in clip_id order, so ids do not depend on input order.
Dataset transfer_clips(const Dataset& ds, std::vector<ClipMaskSet> clips, const std::vector<int>& frame_indices,
                       const TransferOptions& options = {}, TransferStats* stats = nullptr);

// On-disk layout of one clip directory:
//   <clip_dir>/clip.json                          manifest
//   <clip_dir>/<annotation_id>/<frame_index>.json RLE mask per object per frame
// clip.json: {"clip_id", "source_image_id", "frame_count", "width", "height",
//             "objects": [annotation ids], "frame_files": [optional names]}
inline constexpr const char* kClipManifestName = "clip.json";

ClipMaskSet load_clip(const std::filesystem::path& clip_dir);
void save_clip(const std::filesystem::path& clip_dir, const ClipMaskSet& clip);

/// Subdirectories of clips_dir holding a clip.json, sorted by name.
std::vector<std::filesystem::path> list_clip_dirs(const std::filesystem::path& clips_dir);

/// Synthetic image file name for frame t: "<clip_id>/<frame_files[t]>" or "<clip_id>/frame_00000.png".
std::string synthetic_file_name(const ClipMaskSet& clip, int frame_index);

}  // namespace stamp
