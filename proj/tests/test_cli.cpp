#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <map>
#include <string>

#include "doctest.h"
#include "stamp/image.hpp"
#include "stamp/io.hpp"
#include "stamp/manifest.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using stamp::Json;

namespace {

const fs::path kCli = STAMP_CLI_PATH;
const fs::path kFixtures = STAMP_FIXTURES_DIR;

int run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " '" + kCli.string() + "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string config_arg() { return "--config '" + (kFixtures / "config.json").string() + "'"; }

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

std::map<std::string, std::string> tree_hashes(const fs::path& root) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = stamp::sha256_file(e.path());
    return out;
}

// transfer -> disocclude -> pseudo -> manifest into `out`.
int run_pipeline(const fs::path& out, const std::string& env = "") {
    const std::string base = config_arg() + " --out " + q(out);
    int rc = run("transfer " + base, env);
    if (rc) return rc;
    rc = run("disocclude " + base + " --dataset " + q(out / "dataset.transferred.json"), env);
    if (rc) return rc;
    rc = run("pseudo " + base + " --dataset " + q(out / "dataset.transferred.json") + " --masks " + q(out / "masks"),
             env);
    if (rc) return rc;
    return run("manifest " + base + " --dataset " + q(out / "dataset.pseudo.json"), env);
}

}  // namespace

TEST_CASE("validate passes on the shipped fixtures") {
    testing::TempDir out("cli_validate");
    CHECK(run("validate " + config_arg() + " --out " + q(out.path())) == 0);
    const Json report = stamp::read_json_file(out / "validate_report.json");
    CHECK(report.at("ok") == true);
    CHECK(report.at("counts").at("failed") == 0);
    CHECK(report.at("counts").at("files").get<int>() >= 8);
}

TEST_CASE("validate fails on a corrupted file with exit code 1") {
    testing::TempDir out("cli_corrupt");
    auto bytes = stamp::read_file_bytes(kFixtures / "tracks" / "toyclip.trk");
    bytes.resize(bytes.size() - 3);
    stamp::write_file_bytes(out / "bad.trk", bytes);
    CHECK(run("validate --out " + q(out / "o") + " " + q(out / "bad.trk")) == 1);
    const Json report = stamp::read_json_file(out / "o" / "validate_report.json");
    CHECK(report.at("ok") == false);
}

TEST_CASE("exit codes for configuration and io problems") {
    testing::TempDir out("cli_codes");
    const std::string base = config_arg() + " --out " + q(out.path());
    CHECK(run("transfer " + base + " --dataset " + q(out / "missing.json")) == 2);
    CHECK(run("transfer --config " + q(out / "nope.json") + " --out " + q(out.path())) == 2);
    CHECK(run("transfer " + base + " --set pseudo.bogus=1") == 1);
    CHECK(run("transfer " + base + " --set frames.count=9") == 1);
    CHECK(run("frobnicate") == 1);
    CHECK(run("transfer") == 1);
    CHECK(run("--help") == 0);
}

TEST_CASE("toy pipeline counts and reruns") {
    testing::TempDir a("cli_pipe_a");
    const auto before = tree_hashes(kFixtures);
    REQUIRE(run_pipeline(a.path()) == 0);
    CHECK(tree_hashes(kFixtures) == before);

    const Json transfer = stamp::read_json_file(a / "transfer_report.json");
    CHECK(transfer.at("counts").at("transferred_annotations") == 13);
    CHECK(transfer.at("counts").at("synthetic_images") == 8);
    CHECK(transfer.at("counts").at("empty_masks") == 3);
    CHECK(transfer.at("outputs").at("dataset.transferred.json") ==
          stamp::sha256_file(a / "dataset.transferred.json"));

    const Json pseudo = stamp::read_json_file(a / "pseudo_report.json");
    CHECK(pseudo.at("counts").at("pseudo_labels") == 2);

    const auto manifest = stamp::load_manifest(a / "manifest.ndjson");
    CHECK(manifest.epochs.size() == 8);
    for (const auto& epoch : manifest.epochs) CHECK(epoch.size() == 6);

    const auto first = tree_hashes(a.path());
    REQUIRE(run_pipeline(a.path()) == 0);
    CHECK(tree_hashes(a.path()) == first);
}

TEST_CASE("pipeline outputs do not depend on the worker count") {
    testing::TempDir one("cli_t1"), many("cli_t8");
    REQUIRE(run_pipeline(one.path(), "STAMP_THREADS=1") == 0);
    REQUIRE(run_pipeline(many.path(), "STAMP_THREADS=8") == 0);
    for (const char* report : {"transfer_report.json", "disocclude_report.json", "pseudo_report.json",
                               "manifest_report.json"}) {
        const Json x = stamp::read_json_file(one / report), y = stamp::read_json_file(many / report);
        CHECK(x.at("outputs") == y.at("outputs"));
        CHECK(x.at("counts") == y.at("counts"));
    }
    CHECK(stamp::read_file_bytes(one / "manifest.ndjson") == stamp::read_file_bytes(many / "manifest.ndjson"));
}

TEST_CASE("coverage of a set against itself is complete") {
    testing::TempDir out("cli_cov");
    const fs::path train = kFixtures / "embeddings" / "train.emb";
    REQUIRE(run("coverage " + config_arg() + " --out " + q(out.path()) + " --val-emb " + q(train)) == 0);
    const Json cov = stamp::read_json_file(out / "coverage.json");
    CHECK(cov.at("recall") == 1.0);
}

TEST_CASE("curate emits plans and a filtered id list") {
    testing::TempDir out("cli_curate");
    REQUIRE(run("transfer " + config_arg() + " --out " + q(out.path())) == 0);
    REQUIRE(run("curate " + config_arg() + " --out " + q(out.path()) + " --set curation.crops_enabled=true" +
                " --dataset " + q(out / "dataset.transferred.json") +
                " --set curation.crop_w=32 --set curation.crop_h=24 --seed 3") == 0);
    const Json frames = stamp::read_json_file(out / "frames.json");
    CHECK(frames == Json::array({0, 5, 10, 15, 20, 25, 30, 35}));
    const Json kept = stamp::read_json_file(out / "kept_ids.json");
    CHECK(kept == Json::array({5, 6, 8, 9, 10, 11}));
    const Json crops = stamp::read_json_file(out / "crops.json");
    REQUIRE(crops.size() == 3);
    CHECK(crops[0].at("rects").size() == 5);
    CHECK(fs::exists(out / "crops.json"));
    CHECK(fs::exists(out / "resize_plan.json"));
}

TEST_CASE("fixture generator reproduces the shipped fixtures") {
    testing::TempDir out("regen");
    const std::string cmd = std::string("'") + STAMP_FIXTURE_GENERATOR + "' " + q(out.path()) + " >/dev/null 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    const auto shipped = tree_hashes(kFixtures);
    const auto fresh = tree_hashes(out.path());
    REQUIRE(shipped.size() == fresh.size());
    for (const auto& [rel, hash] : shipped) {
        REQUIRE(fresh.count(rel));
        if (fs::path(rel).extension() == ".png") {
            CHECK(stamp::read_png(kFixtures / rel) == stamp::read_png(out / rel));
        } else {
            INFO(rel);
            CHECK(fresh.at(rel) == hash);
        }
    }
}
