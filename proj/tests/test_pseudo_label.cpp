#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "stamp/coco_io.hpp"
#include "stamp/error.hpp"
#include "stamp/pseudo_label.hpp"
#include "support.hpp"

using namespace stamp;

namespace {

// 20x20 image whose left 6 columns are invalid.
struct Frame {
    ImageRecord image = testing::synthetic_image(2, 1, 0, 20, 20);
    ValidityMask mask{20, 20, true};
    Frame() {
        for (int r = 0; r < 20; ++r)
            for (int c = 0; c < 6; ++c) mask.set(r, c, false);
    }
};

Prediction pred(ImageId image, BBox box, double conf, CategoryId cat = 1) {
    return Prediction{.image_id = image, .category_id = cat, .bbox = box, .confidence = conf};
}

double interval_iou(const oracle::Box& a, const oracle::Box& b) {
    const double iw = std::max(0.0, std::min(a.x + a.w, b.x + b.w) - std::max(a.x, b.x));
    const double ih = std::max(0.0, std::min(a.y + a.h, b.y + b.h) - std::max(a.y, b.y));
    const double inter = iw * ih;
    return inter / (a.w * a.h + b.w * b.h - inter);
}

}  // namespace

TEST_CASE("worked example is kept under the default thresholds") {
    Frame f;
    // box covers columns 0..9: 6 of 10 columns invalid
    const BBox box(0, 0, 10, 10);
    REQUIRE(invalid_fraction(box, f.mask) == doctest::Approx(0.6));
    const auto gt = testing::gt_annotation(1, 2, BBox(0, 0, 10, 3));
    REQUIRE(iou(box, gt.bbox) == doctest::Approx(0.3));
    const auto kept = select_pseudo_labels(f.image, {pred(2, box, 0.8)}, {gt}, f.mask, {});
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].source == AnnotationSource::Pseudo);
    CHECK(kept[0].confidence == 0.8);
    CHECK(kept[0].bbox == box);
}

TEST_CASE("boundary and duplicate cases are rejected") {
    Frame f;
    const BBox box(0, 0, 10, 10);
    CHECK(select_pseudo_labels(f.image, {pred(2, box, 0.7)}, {}, f.mask, {}).empty());
    CHECK(select_pseudo_labels(f.image, {pred(2, box, 0.7000001)}, {}, f.mask, {}).size() == 1);
    const auto gt = testing::gt_annotation(1, 2, box);
    CHECK(select_pseudo_labels(f.image, {pred(2, box, 1.0)}, {gt}, f.mask, {}).empty());
    // fraction exactly at threshold is kept, IoU exactly at threshold is rejected
    CHECK(select_pseudo_labels(f.image, {pred(2, BBox(0, 0, 12, 4), 0.9)}, {}, f.mask, {}).size() == 1);
    const auto half = testing::gt_annotation(1, 2, BBox(0, 0, 10, 5));
    CHECK(select_pseudo_labels(f.image, {pred(2, box, 0.9)}, {half}, f.mask, {}).empty());
    // mostly valid region
    CHECK(select_pseudo_labels(f.image, {pred(2, BBox(8, 8, 10, 10), 0.99)}, {}, f.mask, {}).empty());
}

TEST_CASE("selection errors") {
    Frame f;
    CHECK_THROWS_AS(select_pseudo_labels(f.image, {}, {}, ValidityMask(10, 20, true), {}), ValidationError);
    CHECK_THROWS_AS(select_pseudo_labels(f.image, {pred(3, BBox(0, 0, 2, 2), 0.9)}, {}, f.mask, {}),
                    ValidationError);
    CHECK_THROWS_AS(select_pseudo_labels(f.image, {}, {testing::gt_annotation(1, 7, BBox(0, 0, 1, 1))}, f.mask, {}),
                    ValidationError);
    CHECK_THROWS_AS(select_pseudo_labels(f.image, {}, {}, f.mask, PseudoLabelParams{1.5, 0.5, 0.5}),
                    ValidationError);
}

TEST_CASE("selection equals the three-predicate rule on random instances") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> px(0, 18), grid(0, 20);
    std::uniform_int_distribution<int> n_gt(0, 3), n_pred(1, 6);
    for (int i = 0; i < 1000; ++i) {
        Frame f;
        f.mask = ValidityMask(testing::random_bitmap(rng, 20, 20, grid(rng) / 20.0));
        const PseudoLabelParams params{grid(rng) / 20.0, grid(rng) / 20.0, grid(rng) / 20.0};
        auto random_box = [&] {
            const int x = px(rng), y = px(rng);
            std::uniform_int_distribution<int> w(1, 20 - x), h(1, 20 - y);
            return oracle::Box{double(x), double(y), double(w(rng)), double(h(rng))};
        };
        std::vector<Annotation> gt;
        std::vector<oracle::Box> gt_boxes;
        for (int k = n_gt(rng); k > 0; --k) {
            gt_boxes.push_back(random_box());
            const auto& b = gt_boxes.back();
            gt.push_back(testing::gt_annotation(k, 2, BBox(b.x, b.y, b.w, b.h)));
        }
        std::vector<Prediction> preds;
        std::vector<bool> expected;
        for (int k = n_pred(rng); k > 0; --k) {
            const auto b = random_box();
            const double conf = grid(rng) / 20.0;
            preds.push_back(pred(2, BBox(b.x, b.y, b.w, b.h), conf));
            double max_iou = -1.0;  // no ground truth means no duplicate
            for (const auto& g : gt_boxes) max_iou = std::max(max_iou, interval_iou(b, g));
            expected.push_back(oracle::pseudo_keep({conf, oracle::invalid_fraction(b, f.mask), max_iou},
                                                   params.conf_threshold, params.area_ratio_threshold,
                                                   params.iou_threshold));
        }
        const auto kept = select_pseudo_labels(f.image, preds, gt, f.mask, params);
        std::size_t j = 0;
        for (std::size_t k = 0; k < preds.size(); ++k) {
            if (!expected[k]) continue;
            REQUIRE(j < kept.size());
            CHECK(kept[j].bbox == preds[k].bbox);
            ++j;
        }
        REQUIRE(j == kept.size());
    }
}

TEST_CASE("stricter thresholds never keep more") {
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<int> px(0, 15), sz(1, 5);
    std::uniform_real_distribution<double> conf(0, 1);
    Frame f;
    f.mask = ValidityMask(testing::random_bitmap(rng, 20, 20, 0.4));
    std::vector<Prediction> preds;
    for (int k = 0; k < 200; ++k) preds.push_back(pred(2, BBox(px(rng), px(rng), sz(rng), sz(rng)), conf(rng)));
    const std::vector<Annotation> gt = {testing::gt_annotation(1, 2, BBox(4, 4, 5, 5))};
    std::size_t prev = preds.size() + 1;
    for (double t : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
        const auto n = select_pseudo_labels(f.image, preds, gt, f.mask, {t, t, 1.0 - t}).size();
        CHECK(n <= prev);
        prev = n;
    }
}

TEST_CASE("merging pseudo labels") {
    Dataset ds = testing::pool_dataset(1, 1);
    ds.annotations.push_back(testing::gt_annotation(5, 1, BBox(0, 0, 4, 4)));
    CHECK(merge_pseudo(ds, {}) == ds);

    Frame f;
    const auto kept = select_pseudo_labels(testing::synthetic_image(2, 1, 0, 64, 48),
                                           {pred(2, BBox(0, 0, 3, 3), 0.9), pred(2, BBox(1, 1, 3, 3), 0.95)}, {},
                                           ValidityMask(48, 64, false), {});
    REQUIRE(kept.size() == 2);
    const Dataset merged = merge_pseudo(ds, kept);
    REQUIRE(merged.annotations.size() == 3);
    CHECK(merged.annotations[1].id == 6);
    CHECK(merged.annotations[2].id == 7);
    CHECK(merged.annotations[2].extra.at("area") == 9.0);

    testing::TempDir dir("merge");
    save_coco(merged, dir / "m.json");
    const Dataset back = load_coco(dir / "m.json");
    CHECK(back == merged);
    CHECK(back.annotations[2].source == AnnotationSource::Pseudo);
    CHECK(back.annotations[2].confidence == 0.95);

    auto dangling = kept;
    dangling[0].image_id = 99;
    CHECK_THROWS_WITH_AS(merge_pseudo(ds, dangling), doctest::Contains("99"), ValidationError);
}

TEST_CASE("predictions parse from JSON") {
    const auto p = predictions_from_json(
        Json::parse(R"([{"image_id":3,"category_id":1,"bbox":[1,2,3,4],"score":0.5}])"));
    REQUIRE(p.size() == 1);
    CHECK(p[0].bbox == BBox(1, 2, 3, 4));
    CHECK(p[0].confidence == 0.5);
    CHECK_THROWS_AS(predictions_from_json(Json::parse(R"([{"image_id":3,"category_id":1,"bbox":[1,2,3],"score":0.5}])")),
                    ValidationError);
    CHECK_THROWS_AS(predictions_from_json(Json::parse(R"([{"image_id":3,"category_id":1,"bbox":[1,2,3,4],"score":1.5}])")),
                    ValidationError);
    CHECK_THROWS_AS(predictions_from_json(Json::parse(R"({})")), ValidationError);
}
