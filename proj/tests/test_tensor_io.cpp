#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "doctest.h"
#include "stamp/error.hpp"
#include "stamp/io.hpp"
#include "stamp/tensor_io.hpp"
#include "support.hpp"

using namespace stamp;

namespace {

// Hand-rolled little-endian writer describing the on-disk layout.
struct Bytes {
    std::vector<std::uint8_t> data;
    void tag(const char* t) { data.insert(data.end(), t, t + 4); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) data.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void u8(std::uint8_t v) { data.push_back(v); }
};

FlowField random_flow(std::mt19937_64& rng, int t, int h, int w) {
    std::uniform_real_distribution<float> d(-10, 10), u(0, 1);
    FlowField f = testing::zero_flow(t, h, w);
    for (auto& v : f.flow) v = d(rng);
    for (auto& v : f.vis) v = u(rng);
    for (auto& v : f.conf) v = u(rng);
    return f;
}

TrackGrid random_tracks(std::mt19937_64& rng, int t, int n) {
    std::uniform_real_distribution<float> d(-5, 70);
    std::bernoulli_distribution vis(0.7);
    TrackGrid g{t, n, {}};
    for (int i = 0; i < t * n; ++i) g.records.push_back({d(rng), d(rng), vis(rng)});
    return g;
}

bool has_failure(const ValidationReport& r, const std::string& name, const std::string& fragment) {
    for (const auto& c : r.checks) {
        if (!c.ok && c.name == name && c.detail.find(fragment) != std::string::npos) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("flow encoding matches the documented layout") {
    std::mt19937_64 rng(1);
    const FlowField f = random_flow(rng, 2, 3, 4);
    Bytes b;
    b.tag("FLW1");
    b.u32(2);
    b.u32(3);
    b.u32(4);
    for (float v : f.flow) b.f32(v);
    for (float v : f.vis) b.f32(v);
    for (float v : f.conf) b.f32(v);
    CHECK(encode_flow(f) == b.data);
    CHECK(b.data.size() == 16 + 16 * 2 * 3 * 4);
}

TEST_CASE("track encoding matches the documented layout") {
    std::mt19937_64 rng(2);
    const TrackGrid g = random_tracks(rng, 3, 5);
    Bytes b;
    b.tag("TRK1");
    b.u32(3);
    b.u32(5);
    for (const auto& p : g.records) {
        b.f32(p.x);
        b.f32(p.y);
        b.u8(p.visible ? 1 : 0);
        b.u8(0);
        b.u8(0);
        b.u8(0);
    }
    CHECK(encode_tracks(g) == b.data);
}

TEST_CASE("embedding encoding matches the documented layout") {
    const EmbeddingMatrix e = testing::rows_of({{1, 2, 3}, {4, 5, 6}});
    Bytes b;
    b.tag("EMB1");
    b.u32(2);
    b.u32(3);
    for (float v : e.values) b.f32(v);
    CHECK(encode_embeddings(e) == b.data);
}

TEST_CASE("random flow fields round trip byte for byte") {
    std::mt19937_64 rng(3);
    testing::TempDir dir("flow_rt");
    std::uniform_int_distribution<int> dim(1, 9);
    for (int i = 0; i < 50; ++i) {
        const FlowField f = random_flow(rng, dim(rng), dim(rng), dim(rng));
        save_flow(dir / "f.flw", f);
        const auto bytes = read_file_bytes(dir / "f.flw");
        const FlowField back = load_flow(dir / "f.flw");
        CHECK(back == f);
        save_flow(dir / "g.flw", back);
        CHECK(read_file_bytes(dir / "g.flw") == bytes);
    }
}

TEST_CASE("tracks, embeddings and scores round trip") {
    std::mt19937_64 rng(4);
    testing::TempDir dir("misc_rt");
    const TrackGrid g = random_tracks(rng, 4, 9);
    save_tracks(dir / "t.trk", g);
    CHECK(load_tracks(dir / "t.trk") == g);

    const EmbeddingMatrix e = testing::gaussian_embeddings(rng, 7, 5);
    save_embeddings(dir / "e.emb", embedding_sidecar_for(dir / "e.emb"), e);
    CHECK(std::filesystem::exists(dir / "e.ids.json"));
    CHECK(load_embeddings(dir / "e.emb", dir / "e.ids.json") == e);

    ScoreTable s;
    s.scores = {{"a", 0.25}, {"b", -1.5}, {"c", 3.0}};
    save_scores(dir / "s.json", s);
    CHECK(load_scores(dir / "s.json") == s);
}

TEST_CASE("loaders are deterministic") {
    std::mt19937_64 rng(5);
    testing::TempDir dir("det");
    save_flow(dir / "f.flw", random_flow(rng, 2, 5, 5));
    CHECK(load_flow(dir / "f.flw") == load_flow(dir / "f.flw"));
}

TEST_CASE("wrong magic names the expected tag") {
    std::mt19937_64 rng(6);
    testing::TempDir dir("magic");
    save_tracks(dir / "t.trk", random_tracks(rng, 2, 2));
    try {
        load_flow(dir / "t.trk");
        FAIL("expected a validation error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("FLW1") != std::string::npos);
    }
}

TEST_CASE("zero frame header is an empty sequence") {
    Bytes b;
    b.tag("FLW1");
    b.u32(0);
    b.u32(4);
    b.u32(4);
    ValidationReport r;
    decode_flow(b.data, r);
    CHECK_FALSE(r.ok());
    CHECK(r.first_failure().find("empty sequence") != std::string::npos);

    Bytes t;
    t.tag("TRK1");
    t.u32(0);
    t.u32(3);
    ValidationReport rt;
    decode_tracks(t.data, rt);
    CHECK(rt.first_failure().find("empty sequence") != std::string::npos);
}

TEST_CASE("validate reports an all-pass EMB1 file") {
    std::mt19937_64 rng(7);
    testing::TempDir dir("emb_ok");
    save_embeddings(dir / "e.emb", dir / "e.ids.json", testing::gaussian_embeddings(rng, 6, 4));
    const ValidationReport r = validate(dir / "e.emb");
    CHECK(r.ok());
    CHECK(r.kind == "EMB1");
    CHECK(r.checks.size() >= 5);
    const Json j = r.to_json();
    CHECK(j.at("ok") == true);
    for (const auto& c : j.at("checks")) CHECK(c.at("ok") == true);
}

TEST_CASE("validate flags a NaN at row 3") {
    std::mt19937_64 rng(8);
    testing::TempDir dir("emb_nan");
    EmbeddingMatrix e = testing::gaussian_embeddings(rng, 6, 4);
    e.values[3 * 4 + 2] = std::numeric_limits<float>::quiet_NaN();
    save_embeddings(dir / "e.emb", dir / "e.ids.json", e);
    const ValidationReport r = validate(dir / "e.emb");
    CHECK_FALSE(r.ok());
    CHECK(has_failure(r, "finite", "row 3"));
    CHECK_THROWS_AS(load_embeddings(dir / "e.emb", dir / "e.ids.json"), ValidationError);
}

TEST_CASE("validate flags a truncated TRK1 file with expected and actual sizes") {
    std::mt19937_64 rng(9);
    testing::TempDir dir("trk_trunc");
    auto bytes = encode_tracks(random_tracks(rng, 3, 4));
    const std::size_t full = bytes.size();
    bytes.resize(full - 5);
    write_file_bytes(dir / "t.trk", bytes);
    const ValidationReport r = validate(dir / "t.trk");
    CHECK(has_failure(r, "size", "truncated payload"));
    CHECK(has_failure(r, "size", std::to_string(full)));
    CHECK(has_failure(r, "size", std::to_string(full - 5)));
}

TEST_CASE("corruption fuzz never escapes the report") {
    std::mt19937_64 rng(10);
    testing::TempDir dir("fuzz");
    const std::vector<std::vector<std::uint8_t>> seeds = {
        encode_flow(random_flow(rng, 2, 3, 3)), encode_tracks(random_tracks(rng, 2, 3)),
        encode_embeddings(testing::gaussian_embeddings(rng, 3, 2))};
    write_file_text(dir / "x.ids.json", R"(["g0","g1","g2"])");
    std::uniform_int_distribution<int> op(0, 3);
    for (int i = 0; i < 600; ++i) {
        auto bytes = seeds[i % 3];
        const std::size_t original = bytes.size();
        switch (op(rng)) {
        case 0:  // flip a magic byte
            bytes[rng() % 4] ^= 0x20;
            break;
        case 1:  // truncate
            bytes.resize(rng() % original);
            break;
        case 2:  // extend
            bytes.push_back(static_cast<std::uint8_t>(rng()));
            break;
        default:  // perturb a header count
            bytes[4 + rng() % 8] ^= static_cast<std::uint8_t>(1 + rng() % 255);
            break;
        }
        write_file_bytes(dir / "x.bin", bytes);
        ValidationReport r;
        REQUIRE_NOTHROW(r = validate(dir / "x.bin"));
        CHECK_FALSE(r.ok());
        CHECK_FALSE(r.first_failure().empty());
    }
}

TEST_CASE("flow values outside the unit interval are reported") {
    FlowField f = testing::zero_flow(1, 2, 2);
    f.vis[1] = 1.5f;
    ValidationReport r;
    decode_flow(encode_flow(f), r);
    CHECK(has_failure(r, "unit_interval", "index 1"));
}

TEST_CASE("track records with bad padding are reported") {
    auto bytes = encode_tracks(TrackGrid{1, 1, {{1, 2, true}}});
    bytes[12 + 9] = 7;
    ValidationReport r;
    decode_tracks(bytes, r);
    CHECK(has_failure(r, "record_layout", "frame 0"));
}

TEST_CASE("embedding sidecar problems are reported") {
    const auto bytes = encode_embeddings(testing::rows_of({{1}, {2}}));
    ValidationReport count;
    decode_embeddings(bytes, Json::parse(R"(["a"])"), count);
    CHECK(has_failure(count, "ids_count", "1 ids"));
    ValidationReport dup;
    decode_embeddings(bytes, Json::parse(R"(["a","a"])"), dup);
    CHECK(has_failure(dup, "ids_unique", "'a'"));
    ValidationReport shape;
    decode_embeddings(bytes, Json::parse(R"({"a":1})"), shape);
    CHECK_FALSE(shape.ok());
}

TEST_CASE("scores must be a flat numeric object") {
    ValidationReport ok;
    CHECK(decode_scores(Json::parse(R"({"a":1,"b":0.5})"), ok).scores.size() == 2);
    CHECK(ok.ok());
    ValidationReport nested;
    decode_scores(Json::parse(R"({"a":{"x":1}})"), nested);
    CHECK(has_failure(nested, "numeric", "'a'"));
    ValidationReport arr;
    decode_scores(Json::parse("[1,2]"), arr);
    CHECK_FALSE(arr.ok());
}

TEST_CASE("validate handles unreadable and unrecognised files") {
    testing::TempDir dir("unk");
    CHECK_FALSE(validate(dir / "missing.flw").ok());
    write_file_text(dir / "junk.bin", "not json and no magic");
    const auto r = validate(dir / "junk.bin");
    CHECK_FALSE(r.ok());
    CHECK(has_failure(r, "format", "FLW1"));
}
