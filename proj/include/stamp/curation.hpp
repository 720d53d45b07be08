#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stamp/dataset.hpp"
#include "stamp/tensor_io.hpp"

namespace stamp {

/// [offset, offset + stride, ..., offset + (count - 1) * stride], all < total_frames.
std::vector<int> select_frames(int total_frames, int stride, int count, int offset = 0);

/// Drops the floor(remove_fraction * N) lowest-scored ids. Among equal scores the
/// later id goes first. Kept ids keep their input order.
std::vector<std::string> score_filter(const ScoreTable& scores, const std::vector<std::string>& ids,
                                      double remove_fraction);

/// Number of ids score_filter removes: floor(remove_fraction * n), tolerant of
/// representation error in the fraction (0.29 * 100 removes 29).
std::size_t removal_count(std::size_t n, double remove_fraction);

struct ResizePlan {
    int width = 0;
    int height = 0;
    double scale = 1.0;

    bool operator==(const ResizePlan&) const = default;
};

inline constexpr std::int64_t kDefaultMaxArea = 768 * 576;

/// Downscale uniformly to max_area when the image is larger, then round each
/// side up to a multiple of `multiple`.
ResizePlan plan_resize(int width, int height, std::int64_t max_area = kDefaultMaxArea, int multiple = 32);

struct CropRect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    bool operator==(const CropRect&) const = default;
};

struct CropPlan {
    ImageId image_id = 0;
    double scale = 1.0;
    int scaled_width = 0;
    int scaled_height = 0;
    std::vector<CropRect> rects;

    bool operator==(const CropPlan&) const = default;
};

struct CropOptions {
    int crop_width = 768;
    int crop_height = 576;
    int count = 5;
    bool rescale = false;
};

// Random crop plan. With rescale, first draws s = s_min + (1 - s_min) * u with
// s_min = max(crop_w / W, crop_h / H), and the crops are placed inside the
// round(W s) x round(H s) image. Each corner is x = uniform(W' - crop_w + 1),
// then y = uniform(H' - crop_h + 1), per rect.
CropPlan plan_crops(ImageId image_id, int width, int height, const CropOptions& options, std::uint64_t seed);

/// One plan per real image, each seeded with derive_seed(seed, image_id).
std::vector<CropPlan> plan_dataset_crops(const Dataset& ds, const CropOptions& options, std::uint64_t seed);

Json to_json(const CropPlan& plan);
Json to_json(const ResizePlan& plan);

}  // namespace stamp
