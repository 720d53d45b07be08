#include "stamp/tensor_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <set>
#include <sstream>

#include "stamp/error.hpp"

namespace stamp {

namespace {

constexpr std::size_t kMagicSize = 4;
constexpr std::size_t kTrackRecordSize = 12;

class ByteWriter {
public:
    void magic(const char* tag) { bytes_.insert(bytes_.end(), tag, tag + kMagicSize); }
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
    }
    void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
    void u8(std::uint8_t v) { bytes_.push_back(v); }
    void reserve(std::size_t n) { bytes_.reserve(n); }
    std::vector<std::uint8_t> take() { return std::move(bytes_); }

private:
    std::vector<std::uint8_t> bytes_;
};

std::uint32_t read_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    return static_cast<std::uint32_t>(bytes[offset]) | static_cast<std::uint32_t>(bytes[offset + 1]) << 8 |
           static_cast<std::uint32_t>(bytes[offset + 2]) << 16 | static_cast<std::uint32_t>(bytes[offset + 3]) << 24;
}

float read_f32(std::span<const std::uint8_t> bytes, std::size_t offset) {
    return std::bit_cast<float>(read_u32(bytes, offset));
}

std::uint32_t checked_u32(int v, const char* what) {
    if (v < 0) throw ValidationError(std::string("negative ") + what);
    return static_cast<std::uint32_t>(v);
}

// Shared header checks. Returns false when decoding cannot continue.
bool check_header(std::span<const std::uint8_t> bytes, const char* magic, std::size_t header_size,
                  ValidationReport& report) {
    if (bytes.size() < kMagicSize || std::memcmp(bytes.data(), magic, kMagicSize) != 0) {
        std::string found;
        for (std::size_t i = 0; i < std::min(bytes.size(), kMagicSize); ++i) {
            char c = static_cast<char>(bytes[i]);
            found += (c >= 32 && c < 127) ? c : '?';
        }
        report.fail("magic", std::string("magic mismatch: expected '") + magic + "', found '" + found + "'");
        return false;
    }
    report.pass("magic", magic);
    if (bytes.size() < header_size) {
        std::ostringstream msg;
        msg << "truncated header: expected " << header_size << " bytes, got " << bytes.size();
        report.fail("header", msg.str());
        return false;
    }
    report.pass("header");
    return true;
}

bool check_size(std::span<const std::uint8_t> bytes, std::uint64_t expected, ValidationReport& report) {
    if (bytes.size() != expected) {
        std::ostringstream msg;
        msg << (bytes.size() < expected ? "truncated payload" : "trailing bytes") << ": expected " << expected
            << " bytes, got " << bytes.size();
        report.fail("size", msg.str());
        return false;
    }
    report.pass("size", std::to_string(expected) + " bytes");
    return true;
}

std::vector<float> read_block(std::span<const std::uint8_t> bytes, std::size_t offset, std::size_t count) {
    std::vector<float> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = read_f32(bytes, offset + 4 * i);
    return out;
}

// Returns the first non-finite index or npos.
std::size_t first_non_finite(const std::vector<float>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) return i;
    }
    return std::string::npos;
}

std::size_t first_outside_unit(const std::vector<float>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] >= 0.0f && values[i] <= 1.0f)) return i;
    }
    return std::string::npos;
}

void throw_if_failed(const ValidationReport& report, const std::filesystem::path& path) {
    if (!report.ok()) throw ValidationError(path.string() + ": " + report.first_failure());
}

}  // namespace

bool ValidationReport::ok() const noexcept {
    for (const auto& c : checks) {
        if (!c.ok) return false;
    }
    return true;
}

void ValidationReport::pass(std::string name, std::string detail) {
    checks.push_back({std::move(name), true, std::move(detail)});
}

void ValidationReport::fail(std::string name, std::string detail) {
    checks.push_back({std::move(name), false, std::move(detail)});
}

std::string ValidationReport::first_failure() const {
    for (const auto& c : checks) {
        if (!c.ok) return c.detail;
    }
    return {};
}

Json ValidationReport::to_json() const {
    Json list = Json::array();
    for (const auto& c : checks) {
        list.push_back({{"name", c.name}, {"ok", c.ok}, {"detail", c.detail}});
    }
    return {{"path", path}, {"kind", kind}, {"ok", ok()}, {"checks", std::move(list)}};
}

std::vector<std::uint8_t> encode_flow(const FlowField& f) {
    const std::size_t pixels = static_cast<std::size_t>(f.frames) * f.height * f.width;
    if (f.flow.size() != 2 * pixels || f.vis.size() != pixels || f.conf.size() != pixels) {
        throw ValidationError("flow field arrays do not match its header");
    }
    ByteWriter w;
    w.reserve(16 + 16 * pixels);
    w.magic("FLW1");
    w.u32(checked_u32(f.frames, "frame count"));
    w.u32(checked_u32(f.height, "height"));
    w.u32(checked_u32(f.width, "width"));
    for (float v : f.flow) w.f32(v);
    for (float v : f.vis) w.f32(v);
    for (float v : f.conf) w.f32(v);
    return w.take();
}

std::vector<std::uint8_t> encode_tracks(const TrackGrid& g) {
    if (g.records.size() != static_cast<std::size_t>(g.frames) * static_cast<std::size_t>(g.points)) {
        throw ValidationError("track grid records do not match its header");
    }
    ByteWriter w;
    w.reserve(12 + kTrackRecordSize * g.records.size());
    w.magic("TRK1");
    w.u32(checked_u32(g.frames, "frame count"));
    w.u32(checked_u32(g.points, "point count"));
    for (const auto& r : g.records) {
        w.f32(r.x);
        w.f32(r.y);
        w.u8(r.visible ? 1 : 0);
        w.u8(0);
        w.u8(0);
        w.u8(0);
    }
    return w.take();
}

std::vector<std::uint8_t> encode_embeddings(const EmbeddingMatrix& e) {
    if (e.values.size() != e.rows() * static_cast<std::size_t>(e.dim)) {
        throw ValidationError("embedding values do not match rows x dim");
    }
    ByteWriter w;
    w.reserve(12 + 4 * e.values.size());
    w.magic("EMB1");
    w.u32(static_cast<std::uint32_t>(e.rows()));
    w.u32(checked_u32(e.dim, "dimension"));
    for (float v : e.values) w.f32(v);
    return w.take();
}

FlowField decode_flow(std::span<const std::uint8_t> bytes, ValidationReport& report) {
    report.kind = "FLW1";
    FlowField f;
    if (!check_header(bytes, "FLW1", 16, report)) return f;
    const std::uint64_t t = read_u32(bytes, 4);
    const std::uint64_t h = read_u32(bytes, 8);
    const std::uint64_t w = read_u32(bytes, 12);
    if (t == 0) {
        report.fail("nonempty", "empty sequence: frame count T is 0");
        return f;
    }
    if (h == 0 || w == 0) {
        report.fail("nonempty", "empty frame: H or W is 0");
        return f;
    }
    report.pass("nonempty");
    const std::uint64_t pixels = t * h * w;
    if (!check_size(bytes, 16 + 16 * pixels, report)) return f;

    f.frames = static_cast<int>(t);
    f.height = static_cast<int>(h);
    f.width = static_cast<int>(w);
    f.flow = read_block(bytes, 16, 2 * pixels);
    f.vis = read_block(bytes, 16 + 8 * pixels, pixels);
    f.conf = read_block(bytes, 16 + 12 * pixels, pixels);

    bool finite = true;
    for (auto [name, block] : {std::pair{"flow", &f.flow}, std::pair{"vis", &f.vis}, std::pair{"conf", &f.conf}}) {
        if (auto i = first_non_finite(*block); i != std::string::npos) {
            report.fail("finite", std::string("non-finite value in ") + name + " block at index " + std::to_string(i));
            finite = false;
        }
    }
    if (finite) report.pass("finite");
    bool unit = true;
    for (auto [name, block] : {std::pair{"vis", &f.vis}, std::pair{"conf", &f.conf}}) {
        if (auto i = first_outside_unit(*block); i != std::string::npos) {
            report.fail("unit_interval", std::string(name) + " value outside [0, 1] at index " + std::to_string(i));
            unit = false;
        }
    }
    if (unit) report.pass("unit_interval");
    return f;
}

TrackGrid decode_tracks(std::span<const std::uint8_t> bytes, ValidationReport& report) {
    report.kind = "TRK1";
    TrackGrid g;
    if (!check_header(bytes, "TRK1", 12, report)) return g;
    const std::uint64_t t = read_u32(bytes, 4);
    const std::uint64_t n = read_u32(bytes, 8);
    if (t == 0) {
        report.fail("nonempty", "empty sequence: frame count T is 0");
        return g;
    }
    if (n == 0) {
        report.fail("nonempty", "empty point set: N is 0");
        return g;
    }
    report.pass("nonempty");
    if (!check_size(bytes, 12 + kTrackRecordSize * t * n, report)) return g;

    g.frames = static_cast<int>(t);
    g.points = static_cast<int>(n);
    g.records.resize(t * n);
    std::size_t bad_coord = std::string::npos;
    std::size_t bad_flag = std::string::npos;
    for (std::size_t i = 0; i < g.records.size(); ++i) {
        const std::size_t off = 12 + kTrackRecordSize * i;
        auto& r = g.records[i];
        r.x = read_f32(bytes, off);
        r.y = read_f32(bytes, off + 4);
        const std::uint8_t flag = bytes[off + 8];
        r.visible = flag != 0;
        if (bad_coord == std::string::npos && !(std::isfinite(r.x) && std::isfinite(r.y))) bad_coord = i;
        if (bad_flag == std::string::npos &&
            (flag > 1 || bytes[off + 9] != 0 || bytes[off + 10] != 0 || bytes[off + 11] != 0)) {
            bad_flag = i;
        }
    }
    if (bad_coord != std::string::npos) {
        report.fail("finite", "non-finite coordinate at frame " + std::to_string(bad_coord / n) + ", point " +
                                  std::to_string(bad_coord % n));
    } else {
        report.pass("finite");
    }
    if (bad_flag != std::string::npos) {
        report.fail("record_layout", "visible flag not 0/1 or nonzero padding at frame " +
                                         std::to_string(bad_flag / n) + ", point " + std::to_string(bad_flag % n));
    } else {
        report.pass("record_layout");
    }
    return g;
}

EmbeddingMatrix decode_embeddings(std::span<const std::uint8_t> bytes, const Json& ids, ValidationReport& report) {
    report.kind = "EMB1";
    EmbeddingMatrix e;
    if (!check_header(bytes, "EMB1", 12, report)) return e;
    const std::uint64_t n = read_u32(bytes, 4);
    const std::uint64_t d = read_u32(bytes, 8);
    if (n == 0 || d == 0) {
        report.fail("nonempty", n == 0 ? "empty embedding set: N is 0" : "zero embedding dimension");
        return e;
    }
    report.pass("nonempty");
    if (!check_size(bytes, 12 + 4 * n * d, report)) return e;

    e.dim = static_cast<int>(d);
    e.values = read_block(bytes, 12, n * d);
    if (auto i = first_non_finite(e.values); i != std::string::npos) {
        report.fail("finite", "non-finite value at row " + std::to_string(i / d) + ", column " + std::to_string(i % d));
    } else {
        report.pass("finite");
    }

    if (!ids.is_array() || !std::all_of(ids.begin(), ids.end(), [](const Json& v) { return v.is_string(); })) {
        report.fail("sidecar", "id sidecar must be a JSON array of strings");
        return e;
    }
    report.pass("sidecar");
    if (ids.size() != n) {
        report.fail("ids_count", "sidecar lists " + std::to_string(ids.size()) + " ids, header says " +
                                     std::to_string(n) + " rows");
        return e;
    }
    report.pass("ids_count");
    std::set<std::string> seen;
    for (const Json& v : ids) {
        auto s = v.get<std::string>();
        if (!seen.insert(s).second) {
            report.fail("ids_unique", "duplicate id '" + s + "'");
            return e;
        }
        e.ids.push_back(std::move(s));
    }
    report.pass("ids_unique");
    return e;
}

ScoreTable decode_scores(const Json& value, ValidationReport& report) {
    report.kind = "scores";
    ScoreTable table;
    if (!value.is_object()) {
        report.fail("object", "scores file must be a flat JSON object");
        return table;
    }
    report.pass("object");
    for (auto it = value.begin(); it != value.end(); ++it) {
        if (!it->is_number() || !std::isfinite(it->get<double>())) {
            report.fail("numeric", "score for '" + it.key() + "' is not a finite number");
            return table;
        }
        table.scores.emplace(it.key(), it->get<double>());
    }
    report.pass("numeric", std::to_string(table.scores.size()) + " scores");
    return table;
}

FlowField load_flow(const std::filesystem::path& path) {
    auto bytes = read_file_bytes(path);
    ValidationReport report{path.string(), "FLW1", {}};
    auto f = decode_flow(bytes, report);
    throw_if_failed(report, path);
    return f;
}

TrackGrid load_tracks(const std::filesystem::path& path) {
    auto bytes = read_file_bytes(path);
    ValidationReport report{path.string(), "TRK1", {}};
    auto g = decode_tracks(bytes, report);
    throw_if_failed(report, path);
    return g;
}

EmbeddingMatrix load_embeddings(const std::filesystem::path& path, const std::filesystem::path& sidecar_path) {
    auto bytes = read_file_bytes(path);
    Json ids = read_json_file(sidecar_path);
    ValidationReport report{path.string(), "EMB1", {}};
    auto e = decode_embeddings(bytes, ids, report);
    throw_if_failed(report, path);
    return e;
}

ScoreTable load_scores(const std::filesystem::path& path) {
    ValidationReport report{path.string(), "scores", {}};
    auto t = decode_scores(read_json_file(path), report);
    throw_if_failed(report, path);
    return t;
}

void save_flow(const std::filesystem::path& path, const FlowField& flow) {
    write_file_bytes(path, encode_flow(flow));
}

void save_tracks(const std::filesystem::path& path, const TrackGrid& tracks) {
    write_file_bytes(path, encode_tracks(tracks));
}

void save_embeddings(const std::filesystem::path& path, const std::filesystem::path& sidecar_path,
                     const EmbeddingMatrix& emb) {
    write_file_bytes(path, encode_embeddings(emb));
    write_file_text(sidecar_path, Json(emb.ids).dump() + "\n");
}

void save_scores(const std::filesystem::path& path, const ScoreTable& scores) {
    write_json_file(path, Json(scores.scores));
}

std::filesystem::path embedding_sidecar_for(const std::filesystem::path& path) {
    auto sidecar = path;
    sidecar.replace_extension(".ids.json");
    return sidecar;
}

ValidationReport validate(const std::filesystem::path& path) {
    ValidationReport report{path.string(), "unknown", {}};
    std::vector<std::uint8_t> bytes;
    try {
        bytes = read_file_bytes(path);
    } catch (const IoError& e) {
        report.fail("readable", e.what());
        return report;
    }
    report.pass("readable");
    auto has_magic = [&](const char* tag) {
        return bytes.size() >= kMagicSize && std::memcmp(bytes.data(), tag, kMagicSize) == 0;
    };
    if (has_magic("FLW1")) {
        decode_flow(bytes, report);
    } else if (has_magic("TRK1")) {
        decode_tracks(bytes, report);
    } else if (has_magic("EMB1")) {
        const auto sidecar = embedding_sidecar_for(path);
        Json ids;
        try {
            ids = read_json_file(sidecar);
        } catch (const Error& e) {
            report.kind = "EMB1";
            report.fail("sidecar", e.what());
            return report;
        }
        decode_embeddings(bytes, ids, report);
    } else {
        try {
            Json value = parse_json(std::string(bytes.begin(), bytes.end()), path.string());
            decode_scores(value, report);
        } catch (const ParseError& e) {
            report.fail("format", std::string("not a FLW1/TRK1/EMB1 file or scores JSON: ") + e.what());
        }
    }
    return report;
}

}  // namespace stamp
