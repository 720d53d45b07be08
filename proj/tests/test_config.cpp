#include "doctest.h"
#include "stamp/config.hpp"
#include "stamp/error.hpp"
#include "stamp/io.hpp"
#include "support.hpp"

using namespace stamp;

TEST_CASE("defaults") {
    const Config c = config_from_json(Json::object(), {});
    CHECK(c.frames.stride == 5);
    CHECK(c.frames.count == 8);
    CHECK(c.frames.offset == 0);
    CHECK(c.disocclusion.mode == "dense");
    CHECK(c.disocclusion.dense.vis_threshold == 0.9);
    CHECK(c.disocclusion.dense.conf_threshold == 0.1);
    CHECK(c.disocclusion.dense.sigma == 8.0);
    CHECK(c.disocclusion.dense.weight_threshold == 0.5);
    CHECK(c.pseudo.conf_threshold == 0.7);
    CHECK(c.pseudo.area_ratio_threshold == 0.5);
    CHECK(c.pseudo.iou_threshold == 0.5);
    CHECK(c.recall.k == 3);
    CHECK(c.curation.remove_fraction == 0.1);
    CHECK(c.curation.clip_frames == 81);
    CHECK(c.curation.max_area == 442368);
    CHECK(c.manifest.balanced);
    CHECK(c.transfer.min_area == 1.0);
}

TEST_CASE("partial sections overlay the defaults") {
    const Config c = config_from_json(Json::parse(R"({"pseudo":{"conf_thr":0.6},"frames":{"stride":1,"count":36}})"), {});
    CHECK(c.pseudo.conf_threshold == 0.6);
    CHECK(c.pseudo.iou_threshold == 0.5);
    CHECK(c.frames.stride == 1);
    CHECK(c.frames.count == 36);
}

TEST_CASE("unknown keys and bad values are rejected") {
    CHECK_THROWS_WITH_AS(config_from_json(Json::parse(R"({"pseudo":{"conf":0.6}})"), {}),
                         doctest::Contains("pseudo.conf"), ValidationError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"bogus":1})"), {}), ValidationError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"recall":{"k":0}})"), {}), ValidationError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"recall":{"k":"three"}})"), {}), ValidationError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"disocclusion":{"mode":"blur"}})"), {}), ValidationError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"curation":{"remove_fraction":2}})"), {}), ValidationError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"pseudo":5})"), {}), ValidationError);
}

TEST_CASE("overrides") {
    Json j = Json::object();
    apply_override(j, "pseudo.conf_thr=0.65");
    apply_override(j, "disocclusion.mode=hull");
    apply_override(j, "manifest.balanced=false");
    apply_override(j, "paths.dataset=/data/x.json");
    const Config c = config_from_json(j, {});
    CHECK(c.pseudo.conf_threshold == 0.65);
    CHECK(c.disocclusion.mode == "hull");
    CHECK_FALSE(c.manifest.balanced);
    CHECK(c.paths.dataset == "/data/x.json");
    CHECK_THROWS_AS(apply_override(j, "no_equals"), ValidationError);
    CHECK_THROWS_AS(apply_override(j, "a..b=1"), ValidationError);
}

TEST_CASE("config files resolve relative paths against their directory") {
    testing::TempDir dir("cfg");
    write_file_text(dir / "sub" / "c.json", R"({"paths":{"dataset":"d.json","scores":"/abs/s.json"}})");
    const Json j = read_config_json(dir / "sub" / "c.json");
    const Config c = config_from_json(j, {});
    CHECK(c.paths.dataset == dir / "sub" / "d.json");
    CHECK(c.paths.scores == "/abs/s.json");
}

TEST_CASE("config json round trip") {
    Config c = config_from_json(Json::parse(R"({"kid":{"seed":18446744073709551615}})"), {});
    CHECK(c.kid.seed == 18446744073709551615ULL);
    c.paths.dataset = "/x/d.json";
    const Config back = config_from_json(config_to_json(c), {});
    CHECK(config_to_json(back) == config_to_json(c));
}
