#include "stamp/validate.hpp"

#include "stamp/coco_io.hpp"
#include "stamp/error.hpp"
#include "stamp/manifest.hpp"
#include "stamp/pseudo_label.hpp"
#include "stamp/rle.hpp"
#include "stamp/transfer.hpp"

namespace stamp {

namespace fs = std::filesystem;

namespace {

template <typename Fn>
void run_check(ValidationReport& report, const char* name, Fn&& fn) {
    try {
        fn();
        report.pass(name);
    } catch (const Error& e) {
        report.fail(name, e.what());
    } catch (const Json::exception& e) {
        report.fail(name, e.what());
    }
}

}  // namespace

ValidationReport validate_any(const fs::path& path) {
    std::error_code ec;
    if (fs::is_directory(path, ec)) {
        ValidationReport report{path.string(), "clip", {}};
        if (!fs::exists(path / kClipManifestName)) {
            report.fail("format", "directory has no " + std::string(kClipManifestName));
            return report;
        }
        run_check(report, "clip", [&] { load_clip(path); });
        return report;
    }
    if (!fs::exists(path, ec)) {
        ValidationReport report{path.string(), "unknown", {}};
        report.fail("readable", "'" + path.string() + "' does not exist");
        return report;
    }
    if (path.extension() == ".ndjson") {
        ValidationReport report{path.string(), "manifest", {}};
        run_check(report, "manifest", [&] { load_manifest(path); });
        return report;
    }

    ValidationReport report = validate(path);
    if (report.kind != "unknown" && report.kind != "scores") return report;

    // Not a tensor file: classify the JSON document.
    Json value;
    try {
        value = read_json_file(path);
    } catch (const Error&) {
        return report;
    }
    if (value.is_object() && value.contains("images")) {
        ValidationReport coco{path.string(), "coco", {}};
        coco.pass("readable");
        run_check(coco, "dataset", [&] { dataset_from_json(value); });
        return coco;
    }
    if (value.is_object() && value.contains("size") && value.contains("counts")) {
        ValidationReport mask{path.string(), "rle_mask", {}};
        mask.pass("readable");
        run_check(mask, "mask", [&] { mask_from_json(value); });
        return mask;
    }
    if (value.is_object() && value.contains("clip_id")) {
        return validate_any(path.parent_path());
    }
    if (value.is_array()) {
        ValidationReport preds{path.string(), "predictions", {}};
        preds.pass("readable");
        run_check(preds, "predictions", [&] { predictions_from_json(value); });
        return preds;
    }
    return report;
}

}  // namespace stamp
