// stamp: dataset curation stages for generated-video augmentation.
//
//   stamp <validate|transfer|disocclude|pseudo|coverage|curate|manifest>
//         [--config FILE] [--out DIR] [--seed N] [--set section.key=value]...
//         [path overrides]
//
// Exit codes: 0 success, 1 validation failure, 2 I/O error.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stamp/config.hpp"
#include "stamp/error.hpp"
#include "stamp/pipeline.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
    std::vector<std::pair<std::string, std::string>> paths;  // config key, value
    std::vector<std::string> positional;
};

struct PathFlag {
    const char* flag;
    const char* key;
    const char* help;
};

constexpr PathFlag kPathFlags[] = {
    {"--dataset", "dataset", "COCO dataset JSON"},
    {"--clips", "clips_dir", "directory of clip mask sets"},
    {"--flows", "flows_dir", "directory of <clip_id>.flw dense flows"},
    {"--tracks", "tracks_dir", "directory of <clip_id>.trk sparse tracks"},
    {"--frames-dir", "frames_dir", "directory of synthetic frame PNGs"},
    {"--masks", "masks_dir", "directory of <image_id>.json validity masks"},
    {"--predictions", "predictions", "detector predictions JSON"},
    {"--train-emb", "embeddings_train", "EMB1 embeddings of the training set"},
    {"--val-emb", "embeddings_val", "EMB1 embeddings of the held-out set"},
    {"--scores", "scores", "score table JSON"},
};

stamp::Config resolve_config(const CommonOptions& opts) {
    stamp::Json j = opts.config.empty() ? stamp::Json::object() : stamp::read_config_json(opts.config);
    for (const auto& [key, value] : opts.paths) j["paths"][key] = fs::absolute(value).string();
    for (const auto& s : opts.sets) stamp::apply_override(j, s);
    if (opts.seed) {
        j["kid"]["seed"] = *opts.seed;
        j["curation"]["seed"] = *opts.seed;
        j["manifest"]["seed"] = *opts.seed;
    }
    if (!opts.out.empty()) j["paths"]["output_dir"] = fs::absolute(opts.out).string();
    stamp::Config config = stamp::config_from_json(j, fs::current_path());
    if (config.paths.output_dir.empty()) throw stamp::ValidationError("no output directory: pass --out or set paths.output_dir");
    return config;
}

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config, "JSON config file");
    cmd->add_option("--out", opts.out, "output directory");
    cmd->add_option("--seed", opts.seed, "seed for every seeded stage (overrides config)");
    cmd->add_option("--set", opts.sets, "config override section.key=value (repeatable)");
    for (const auto& f : kPathFlags) {
        cmd->add_option_function<std::string>(
            f.flag, [&opts, key = f.key](const std::string& v) { opts.paths.emplace_back(key, v); }, f.help);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stamp: curate generated-video clips into detection training data"};
    app.require_subcommand(1);

    CommonOptions opts;
    struct Stage {
        const char* name;
        const char* help;
    };
    const Stage stages[] = {
        {"validate", "validate interchange files named in the config or on the command line"},
        {"transfer", "transfer boxes from clip masks onto synthetic frames"},
        {"disocclude", "compute per-frame validity masks and mask frame images"},
        {"pseudo", "select pseudo labels in disoccluded regions"},
        {"coverage", "k-NN coverage recall and KID between embedding sets"},
        {"curate", "frame selection, resize and crop plans, score filtering"},
        {"manifest", "emit 1:1 real/synthetic per-epoch training manifests"},
    };
    for (const auto& s : stages) {
        CLI::App* cmd = app.add_subcommand(s.name, s.help);
        add_common(cmd, opts);
        if (std::string(s.name) == "validate") {
            cmd->add_option("paths", opts.positional, "extra files or clip directories to validate");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }
    const std::string stage = app.get_subcommands().front()->get_name();

    try {
        const stamp::Config config = resolve_config(opts);
        const fs::path out = config.paths.output_dir;
        stamp::Json report;
        if (stage == "validate") {
            std::vector<fs::path> extra(opts.positional.begin(), opts.positional.end());
            report = stamp::run_validate(config, extra, out);
            if (!report.at("ok").get<bool>()) {
                for (const auto& file : report.at("files")) {
                    if (file.at("ok").get<bool>()) continue;
                    for (const auto& check : file.at("checks")) {
                        if (!check.at("ok").get<bool>()) {
                            std::cerr << "stamp validate: " << file.at("path").get<std::string>() << ": "
                                      << check.at("detail").get<std::string>() << "\n";
                        }
                    }
                }
                return 1;
            }
        } else if (stage == "transfer") {
            report = stamp::run_transfer(config, out);
        } else if (stage == "disocclude") {
            report = stamp::run_disocclude(config, out);
        } else if (stage == "pseudo") {
            report = stamp::run_pseudo(config, out);
        } else if (stage == "coverage") {
            report = stamp::run_coverage(config, out);
        } else if (stage == "curate") {
            report = stamp::run_curate(config, out);
        } else if (stage == "manifest") {
            report = stamp::run_manifest(config, out);
        }
        std::cout << report.at("counts").dump() << "\n";
        return 0;
    } catch (const stamp::IoError& e) {
        std::cerr << "stamp " << stage << ": " << e.what() << "\n";
        return 2;
    } catch (const stamp::ValidationError& e) {
        std::cerr << "stamp " << stage << ": " << e.what() << "\n";
        return 1;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "stamp " << stage << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "stamp " << stage << ": " << e.what() << "\n";
        return 1;
    }
}
