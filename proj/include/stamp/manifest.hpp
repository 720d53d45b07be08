#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "stamp/dataset.hpp"

namespace stamp {

enum class Provenance { Real, Synthetic };

struct ManifestEntry {
    ImageId image_id = 0;
    Provenance provenance = Provenance::Real;

    bool operator==(const ManifestEntry&) const = default;
};

struct Manifest {
    std::vector<std::vector<ManifestEntry>> epochs;
    bool synthetic_pool_empty = false;  // warning: epochs contain real images only

    bool operator==(const Manifest&) const = default;
};

enum class SamplingMode {
    Balanced,      // every real image once plus as many synthetic images, per epoch
    Concatenated,  // every real and every synthetic image once per epoch
};

// Balanced mode: with R real and S synthetic images, the synthetic draws form
// cycles of ceil(S / R) epochs. Each cycle starts from a fresh permutation of
// the synthetic pool, so every synthetic image is used once per cycle; the
// R * ceil(S / R) - S leftover slots of a cycle are refilled with distinct
// images from the cycle's earlier epochs. When S < R each epoch holds whole
// permutations plus a partial one. Entries are shuffled within each epoch.
// Ids are sorted before use, so the result depends only on the id sets.
Manifest build_manifest(const Dataset& ds, int epochs, std::uint64_t seed,
                        SamplingMode mode = SamplingMode::Balanced);

/// Newline-delimited JSON: {"epoch": n} before each epoch, then one
/// {"image_id": id, "provenance": "real"|"synthetic"} line per entry.
std::string manifest_to_ndjson(const Manifest& m);
Manifest manifest_from_ndjson(const std::string& text);

void emit_manifest(const Manifest& m, const std::filesystem::path& path);
Manifest load_manifest(const std::filesystem::path& path);

/// Throws ValidationError if an entry's id is missing from ds or its provenance disagrees.
void validate_manifest(const Manifest& m, const Dataset& ds);

}  // namespace stamp
