#pragma once

// Binary interchange files written by the model bridges. All integers and
// floats are little-endian.
//
//   FLW1  "FLW1" u32 T, u32 H, u32 W
//         f32 flow[T][H][W][2]   (dx, dy) displacement from frame 0, pixels
//         f32 vis [T][H][W]      visibility in [0, 1]
//         f32 conf[T][H][W]      confidence in [0, 1]
//
//   TRK1  "TRK1" u32 T, u32 N
//         T*N records of { f32 x, f32 y, u8 visible, u8 pad[3] = 0 }
//
//   EMB1  "EMB1" u32 N, u32 D
//         f32 rows[N][D]
//         ids live in a sidecar JSON array of N unique strings
//
//   scores  flat JSON object { "<sample id>": <number>, ... }

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stamp/io.hpp"

namespace stamp {

struct FlowField {
    int frames = 0;
    int height = 0;
    int width = 0;
    std::vector<float> flow;  // frames*height*width*2
    std::vector<float> vis;   // frames*height*width
    std::vector<float> conf;  // frames*height*width

    std::size_t pixel_index(int t, int row, int col) const noexcept {
        return (static_cast<std::size_t>(t) * height + row) * width + col;
    }
    float dx(int t, int row, int col) const { return flow[2 * pixel_index(t, row, col)]; }
    float dy(int t, int row, int col) const { return flow[2 * pixel_index(t, row, col) + 1]; }

    bool operator==(const FlowField&) const = default;
};

struct TrackPoint {
    float x = 0.0f;
    float y = 0.0f;
    bool visible = false;

    bool operator==(const TrackPoint&) const = default;
};

struct TrackGrid {
    int frames = 0;
    int points = 0;
    std::vector<TrackPoint> records;  // frame-major: records[t * points + n]

    const TrackPoint& at(int t, int n) const { return records[static_cast<std::size_t>(t) * points + n]; }

    bool operator==(const TrackGrid&) const = default;
};

struct EmbeddingMatrix {
    std::vector<std::string> ids;
    int dim = 0;
    std::vector<float> values;  // rows()*dim, row-major

    std::size_t rows() const noexcept { return ids.size(); }
    std::span<const float> row(std::size_t i) const {
        return std::span<const float>(values).subspan(i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
    }

    bool operator==(const EmbeddingMatrix&) const = default;
};

struct ScoreTable {
    std::map<std::string, double> scores;

    bool operator==(const ScoreTable&) const = default;
};

struct CheckResult {
    std::string name;
    bool ok = true;
    std::string detail;
};

/// Outcome of validating one file. Failures are entries, never exceptions.
struct ValidationReport {
    std::string path;
    std::string kind;
    std::vector<CheckResult> checks;

    bool ok() const noexcept;
    void pass(std::string name, std::string detail = {});
    void fail(std::string name, std::string detail);
    /// First failing check's detail, or empty.
    std::string first_failure() const;
    Json to_json() const;
};

std::vector<std::uint8_t> encode_flow(const FlowField& flow);
std::vector<std::uint8_t> encode_tracks(const TrackGrid& tracks);
std::vector<std::uint8_t> encode_embeddings(const EmbeddingMatrix& emb);

/// Decoders append every check to `report`; the returned value is only meaningful when report.ok().
FlowField decode_flow(std::span<const std::uint8_t> bytes, ValidationReport& report);
TrackGrid decode_tracks(std::span<const std::uint8_t> bytes, ValidationReport& report);
EmbeddingMatrix decode_embeddings(std::span<const std::uint8_t> bytes, const Json& ids, ValidationReport& report);
ScoreTable decode_scores(const Json& value, ValidationReport& report);

/// Loaders throw ValidationError with the first failed check, IoError if unreadable.
FlowField load_flow(const std::filesystem::path& path);
TrackGrid load_tracks(const std::filesystem::path& path);
EmbeddingMatrix load_embeddings(const std::filesystem::path& path, const std::filesystem::path& sidecar_path);
ScoreTable load_scores(const std::filesystem::path& path);

void save_flow(const std::filesystem::path& path, const FlowField& flow);
void save_tracks(const std::filesystem::path& path, const TrackGrid& tracks);
/// Writes the EMB1 payload and its id sidecar.
void save_embeddings(const std::filesystem::path& path, const std::filesystem::path& sidecar_path,
                     const EmbeddingMatrix& emb);
void save_scores(const std::filesystem::path& path, const ScoreTable& scores);

/// Default sidecar location: "<dir>/<stem>.ids.json" for "<dir>/<stem>.<ext>".
std::filesystem::path embedding_sidecar_for(const std::filesystem::path& path);

/// Validates a FLW1/TRK1/EMB1 binary (by magic) or a scores JSON object.
ValidationReport validate(const std::filesystem::path& path);

}  // namespace stamp
