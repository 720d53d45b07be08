#include "stamp/manifest.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

#include "stamp/error.hpp"
#include "stamp/rng.hpp"

namespace stamp {

namespace {

const char* provenance_name(Provenance p) { return p == Provenance::Real ? "real" : "synthetic"; }

// Synthetic ids for `epochs` epochs of `per_epoch` draws each.
std::vector<std::vector<ImageId>> synthetic_schedule(const std::vector<ImageId>& pool, std::size_t per_epoch,
                                                     int epochs, SplitMix64& rng) {
    std::vector<std::vector<ImageId>> schedule;
    schedule.reserve(epochs);
    const std::size_t s = pool.size();
    if (s < per_epoch) {
        // Each epoch: floor(R / S) full permutations then R mod S distinct extras.
        for (int e = 0; e < epochs; ++e) {
            std::vector<ImageId> draws;
            draws.reserve(per_epoch);
            while (draws.size() + s <= per_epoch) {
                auto perm = pool;
                rng.shuffle(perm);
                draws.insert(draws.end(), perm.begin(), perm.end());
            }
            auto perm = pool;
            rng.shuffle(perm);
            draws.insert(draws.end(), perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(per_epoch - draws.size()));
            schedule.push_back(std::move(draws));
        }
        return schedule;
    }

    const std::size_t cycle_epochs = (s + per_epoch - 1) / per_epoch;
    while (schedule.size() < static_cast<std::size_t>(epochs)) {
        auto perm = pool;
        rng.shuffle(perm);
        // The last epoch of the cycle is short by `missing`; refill it from ids the
        // cycle already placed in earlier epochs, which cannot collide with its own.
        const std::size_t missing = cycle_epochs * per_epoch - s;
        if (missing > 0) {
            std::vector<ImageId> earlier(perm.begin(),
                                         perm.begin() + static_cast<std::ptrdiff_t>((cycle_epochs - 1) * per_epoch));
            rng.shuffle(earlier);
            perm.insert(perm.end(), earlier.begin(), earlier.begin() + static_cast<std::ptrdiff_t>(missing));
        }
        for (std::size_t e = 0; e < cycle_epochs && schedule.size() < static_cast<std::size_t>(epochs); ++e) {
            schedule.emplace_back(perm.begin() + static_cast<std::ptrdiff_t>(e * per_epoch),
                                  perm.begin() + static_cast<std::ptrdiff_t>((e + 1) * per_epoch));
        }
    }
    return schedule;
}

}  // namespace

Manifest build_manifest(const Dataset& ds, int epochs, std::uint64_t seed, SamplingMode mode) {
    if (epochs < 1) throw ValidationError("manifest needs at least one epoch");
    std::vector<ImageId> real;
    std::vector<ImageId> synthetic;
    for (const auto& im : ds.images) (im.is_synthetic() ? synthetic : real).push_back(im.id);
    if (real.empty()) throw ValidationError("manifest needs at least one real image");
    std::sort(real.begin(), real.end());
    std::sort(synthetic.begin(), synthetic.end());

    SplitMix64 rng(seed);
    Manifest m;
    m.synthetic_pool_empty = synthetic.empty();

    std::vector<std::vector<ImageId>> synthetic_per_epoch;
    if (mode == SamplingMode::Balanced && !synthetic.empty()) {
        synthetic_per_epoch = synthetic_schedule(synthetic, real.size(), epochs, rng);
    } else {
        synthetic_per_epoch.assign(epochs, synthetic);
    }

    for (int e = 0; e < epochs; ++e) {
        std::vector<ManifestEntry> entries;
        entries.reserve(real.size() + synthetic_per_epoch[e].size());
        for (ImageId id : real) entries.push_back({id, Provenance::Real});
        for (ImageId id : synthetic_per_epoch[e]) entries.push_back({id, Provenance::Synthetic});
        rng.shuffle(entries);
        m.epochs.push_back(std::move(entries));
    }
    return m;
}

std::string manifest_to_ndjson(const Manifest& m) {
    std::string out;
    for (std::size_t e = 0; e < m.epochs.size(); ++e) {
        out += Json{{"epoch", e}}.dump();
        out += '\n';
        for (const auto& entry : m.epochs[e]) {
            out += Json{{"image_id", entry.image_id}, {"provenance", provenance_name(entry.provenance)}}.dump();
            out += '\n';
        }
    }
    return out;
}

Manifest manifest_from_ndjson(const std::string& text) {
    Manifest m;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::string where = "manifest line " + std::to_string(line_no);
        Json j = parse_json(line, where);
        if (j.contains("epoch")) {
            if (!j.at("epoch").is_number_unsigned() || j.at("epoch").get<std::size_t>() != m.epochs.size()) {
                throw ValidationError(where + ": epoch markers must count up from 0");
            }
            m.epochs.emplace_back();
            continue;
        }
        if (m.epochs.empty()) throw ValidationError(where + ": entry before the first epoch marker");
        if (!j.contains("image_id") || !j.at("image_id").is_number_integer() || !j.contains("provenance") ||
            !j.at("provenance").is_string()) {
            throw ValidationError(where + ": entry needs an integer image_id and a provenance string");
        }
        const std::string p = j.at("provenance").get<std::string>();
        if (p != "real" && p != "synthetic") throw ValidationError(where + ": unknown provenance '" + p + "'");
        m.epochs.back().push_back({j.at("image_id").get<ImageId>(), p == "real" ? Provenance::Real : Provenance::Synthetic});
    }
    return m;
}

void emit_manifest(const Manifest& m, const std::filesystem::path& path) {
    write_file_text(path, manifest_to_ndjson(m));
}

Manifest load_manifest(const std::filesystem::path& path) {
    return manifest_from_ndjson(read_file_text(path));
}

void validate_manifest(const Manifest& m, const Dataset& ds) {
    std::unordered_map<ImageId, bool> synthetic;
    for (const auto& im : ds.images) synthetic.emplace(im.id, im.is_synthetic());
    for (std::size_t e = 0; e < m.epochs.size(); ++e) {
        for (const auto& entry : m.epochs[e]) {
            auto it = synthetic.find(entry.image_id);
            if (it == synthetic.end()) {
                throw ValidationError("manifest epoch " + std::to_string(e) + " references missing image " +
                                      std::to_string(entry.image_id));
            }
            if (it->second != (entry.provenance == Provenance::Synthetic)) {
                throw ValidationError("manifest epoch " + std::to_string(e) + " lists image " +
                                      std::to_string(entry.image_id) + " with the wrong provenance");
            }
        }
    }
}

}  // namespace stamp
