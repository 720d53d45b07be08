#include "stamp/curation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "stamp/error.hpp"
#include "stamp/rng.hpp"

namespace stamp {

std::vector<int> select_frames(int total_frames, int stride, int count, int offset) {
    if (stride < 1 || count < 1 || offset < 0) {
        throw ValidationError("frame selection needs stride >= 1, count >= 1 and offset >= 0");
    }
    std::vector<int> frames;
    frames.reserve(count);
    for (int i = 0; i < count; ++i) {
        const long long index = offset + static_cast<long long>(i) * stride;
        if (index >= total_frames) {
            std::ostringstream msg;
            msg << "frame index " << index << " (selection " << i << ") is out of range for a clip of "
                << total_frames << " frames";
            throw ValidationError(msg.str());
        }
        frames.push_back(static_cast<int>(index));
    }
    return frames;
}

std::size_t removal_count(std::size_t n, double remove_fraction) {
    if (!(remove_fraction >= 0.0 && remove_fraction <= 1.0)) {
        throw ValidationError("remove_fraction must lie in [0, 1]");
    }
    const double exact = remove_fraction * static_cast<double>(n);
    return std::min(n, static_cast<std::size_t>(std::floor(exact + 1e-9 * std::max(1.0, exact))));
}

std::vector<std::string> score_filter(const ScoreTable& scores, const std::vector<std::string>& ids,
                                      double remove_fraction) {
    const std::size_t drop = removal_count(ids.size(), remove_fraction);
    std::vector<double> value(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto it = scores.scores.find(ids[i]);
        if (it == scores.scores.end()) throw ValidationError("no score for id '" + ids[i] + "'");
        value[i] = it->second;
    }
    std::vector<std::size_t> order(ids.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return value[a] < value[b] || (value[a] == value[b] && a > b);
    });
    std::vector<bool> removed(ids.size(), false);
    for (std::size_t i = 0; i < drop; ++i) removed[order[i]] = true;
    std::vector<std::string> kept;
    kept.reserve(ids.size() - drop);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (!removed[i]) kept.push_back(ids[i]);
    }
    return kept;
}

namespace {

int round_up(double value, int multiple) {
    // Values within 1e-9 of a multiple (scaling round-off) count as that multiple.
    const double steps = std::ceil(value / multiple - 1e-9);
    return static_cast<int>(std::max(1.0, steps)) * multiple;
}

}  // namespace

ResizePlan plan_resize(int width, int height, std::int64_t max_area, int multiple) {
    if (width <= 0 || height <= 0) throw ValidationError("image dimensions must be positive");
    if (max_area <= 0 || multiple <= 0) throw ValidationError("max_area and multiple must be positive");
    const double area = static_cast<double>(width) * static_cast<double>(height);
    double scale = 1.0;
    if (area > static_cast<double>(max_area)) scale = std::sqrt(static_cast<double>(max_area) / area);
    return {round_up(width * scale, multiple), round_up(height * scale, multiple), scale};
}

CropPlan plan_crops(ImageId image_id, int width, int height, const CropOptions& options, std::uint64_t seed) {
    if (options.crop_width <= 0 || options.crop_height <= 0 || options.count < 0) {
        throw ValidationError("crop size must be positive and count non-negative");
    }
    if (width < options.crop_width || height < options.crop_height) {
        std::ostringstream msg;
        msg << "image " << image_id << " (" << width << "x" << height << ") is smaller than the "
            << options.crop_width << "x" << options.crop_height << " crop";
        throw ValidationError(msg.str());
    }
    SplitMix64 rng(seed);
    CropPlan plan{image_id, 1.0, width, height, {}};
    if (options.rescale) {
        const double s_min = std::max(static_cast<double>(options.crop_width) / width,
                                      static_cast<double>(options.crop_height) / height);
        plan.scale = s_min + (1.0 - s_min) * rng.uniform_unit();
        plan.scaled_width = std::max(options.crop_width, static_cast<int>(std::lround(width * plan.scale)));
        plan.scaled_height = std::max(options.crop_height, static_cast<int>(std::lround(height * plan.scale)));
    }
    const auto slack_x = static_cast<std::uint64_t>(plan.scaled_width - options.crop_width) + 1;
    const auto slack_y = static_cast<std::uint64_t>(plan.scaled_height - options.crop_height) + 1;
    for (int i = 0; i < options.count; ++i) {
        const int x = static_cast<int>(rng.uniform(slack_x));
        const int y = static_cast<int>(rng.uniform(slack_y));
        plan.rects.push_back({x, y, options.crop_width, options.crop_height});
    }
    return plan;
}

std::vector<CropPlan> plan_dataset_crops(const Dataset& ds, const CropOptions& options, std::uint64_t seed) {
    std::vector<const ImageRecord*> real;
    for (const auto& im : ds.images) {
        if (!im.is_synthetic()) real.push_back(&im);
    }
    std::sort(real.begin(), real.end(), [](const ImageRecord* a, const ImageRecord* b) { return a->id < b->id; });
    std::vector<CropPlan> plans;
    plans.reserve(real.size());
    for (const ImageRecord* im : real) {
        plans.push_back(plan_crops(im->id, im->width, im->height, options,
                                   derive_seed(seed, static_cast<std::uint64_t>(im->id))));
    }
    return plans;
}

Json to_json(const CropPlan& plan) {
    Json rects = Json::array();
    for (const auto& r : plan.rects) rects.push_back({r.x, r.y, r.w, r.h});
    return {{"image_id", plan.image_id},
            {"scale", plan.scale},
            {"scaled_size", {plan.scaled_width, plan.scaled_height}},
            {"rects", std::move(rects)}};
}

Json to_json(const ResizePlan& plan) {
    return {{"width", plan.width}, {"height", plan.height}, {"scale", plan.scale}};
}

}  // namespace stamp
