#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "stamp/bitmap.hpp"
#include "stamp/dataset.hpp"
#include "stamp/geometry.hpp"
#include "stamp/tensor_io.hpp"

namespace testing {

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("stamp_test_" + tag + "_" + std::to_string(rd()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline stamp::Bitmap random_bitmap(std::mt19937_64& rng, int h, int w, double density) {
    std::bernoulli_distribution bit(density);
    stamp::Bitmap b(h, w);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) b.set(r, c, bit(rng));
    return b;
}

/// Rows drawn from a small integer lattice so that distance ties occur.
inline stamp::EmbeddingMatrix random_embeddings(std::mt19937_64& rng, std::size_t n, int dim, int lattice,
                                                const std::string& prefix = "r") {
    stamp::EmbeddingMatrix m;
    m.dim = dim;
    std::uniform_int_distribution<int> v(-lattice, lattice);
    for (std::size_t i = 0; i < n; ++i) {
        m.ids.push_back(prefix + std::to_string(i));
        for (int d = 0; d < dim; ++d) m.values.push_back(static_cast<float>(v(rng)) * 0.25f);
    }
    return m;
}

inline stamp::EmbeddingMatrix gaussian_embeddings(std::mt19937_64& rng, std::size_t n, int dim, double mean = 0.0,
                                                  const std::string& prefix = "g") {
    stamp::EmbeddingMatrix m;
    m.dim = dim;
    std::normal_distribution<double> v(mean, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        m.ids.push_back(prefix + std::to_string(i));
        for (int d = 0; d < dim; ++d) m.values.push_back(static_cast<float>(v(rng)));
    }
    return m;
}

inline stamp::EmbeddingMatrix rows_of(std::vector<std::vector<float>> rows) {
    stamp::EmbeddingMatrix m;
    m.dim = rows.empty() ? 0 : static_cast<int>(rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        m.ids.push_back("x" + std::to_string(i));
        m.values.insert(m.values.end(), rows[i].begin(), rows[i].end());
    }
    return m;
}

inline stamp::FlowField zero_flow(int t, int h, int w, float vis = 1.0f, float conf = 1.0f) {
    stamp::FlowField f;
    f.frames = t;
    f.height = h;
    f.width = w;
    const std::size_t n = static_cast<std::size_t>(t) * h * w;
    f.flow.assign(2 * n, 0.0f);
    f.vis.assign(n, vis);
    f.conf.assign(n, conf);
    return f;
}

inline stamp::ImageRecord real_image(stamp::ImageId id, int w = 64, int h = 48) {
    stamp::ImageRecord img;
    img.id = id;
    img.file_name = "img_" + std::to_string(id) + ".png";
    img.width = w;
    img.height = h;
    return img;
}

inline stamp::ImageRecord synthetic_image(stamp::ImageId id, stamp::ImageId source, int frame, int w = 64,
                                          int h = 48) {
    auto img = real_image(id, w, h);
    img.file_name = "clip/frame_" + std::to_string(frame) + ".png";
    img.synthetic = stamp::SyntheticOrigin{source, "clip", frame};
    return img;
}

inline stamp::Annotation gt_annotation(stamp::AnnotationId id, stamp::ImageId image, stamp::BBox box,
                                       stamp::CategoryId category = 1) {
    return stamp::Annotation{.id = id, .image_id = image, .category_id = category, .bbox = box};
}

/// Dataset with `real` real images and `synthetic` synthetic images, ids 1..real+synthetic.
inline stamp::Dataset pool_dataset(int real, int synthetic) {
    stamp::Dataset ds;
    ds.categories.push_back({1, "thing", stamp::Json::object()});
    for (int i = 1; i <= real; ++i) ds.images.push_back(real_image(i));
    for (int i = 0; i < synthetic; ++i) ds.images.push_back(synthetic_image(real + 1 + i, 1 + i % real, i));
    return ds;
}

}  // namespace testing
