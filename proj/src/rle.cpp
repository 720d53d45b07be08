#include "stamp/rle.hpp"

#include <algorithm>
#include <sstream>

#include "stamp/error.hpp"

namespace stamp {

void validate_mask(const BinaryMask& mask) {
    if (mask.height <= 0 || mask.width <= 0) {
        std::ostringstream msg;
        msg << "mask dimensions must be positive, got " << mask.height << "x" << mask.width;
        throw ValidationError(msg.str());
    }
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < mask.counts.size(); ++i) {
        if (mask.counts[i] == 0 && i != 0) {
            std::ostringstream msg;
            msg << "mask has a zero-length run at position " << i;
            throw ValidationError(msg.str());
        }
        total += mask.counts[i];
    }
    const std::uint64_t expected = static_cast<std::uint64_t>(mask.height) * static_cast<std::uint64_t>(mask.width);
    if (total != expected) {
        std::ostringstream msg;
        msg << "mask run lengths sum to " << total << ", expected " << expected << " (" << mask.height << "x"
            << mask.width << ")";
        throw ValidationError(msg.str());
    }
}

BinaryMask rle_encode(const Bitmap& bitmap) {
    if (bitmap.height() <= 0 || bitmap.width() <= 0) {
        throw ValidationError("cannot encode an empty bitmap");
    }
    BinaryMask mask{bitmap.height(), bitmap.width(), {}};
    bool current = false;
    std::uint32_t run = 0;
    for (int col = 0; col < bitmap.width(); ++col) {
        for (int row = 0; row < bitmap.height(); ++row) {
            bool value = bitmap.at(row, col);
            if (value != current) {
                mask.counts.push_back(run);
                run = 0;
                current = value;
            }
            ++run;
        }
    }
    mask.counts.push_back(run);
    return mask;
}

Bitmap rle_decode(const BinaryMask& mask) {
    validate_mask(mask);
    Bitmap bitmap(mask.height, mask.width);
    std::uint64_t pos = 0;
    bool value = false;
    for (std::uint32_t run : mask.counts) {
        if (value) {
            for (std::uint64_t i = pos; i < pos + run; ++i) {
                bitmap.set(static_cast<int>(i % mask.height), static_cast<int>(i / mask.height), true);
            }
        }
        pos += run;
        value = !value;
    }
    return bitmap;
}

std::uint64_t mask_area(const BinaryMask& mask) {
    std::uint64_t area = 0;
    for (std::size_t i = 1; i < mask.counts.size(); i += 2) {
        area += mask.counts[i];
    }
    return area;
}

std::optional<BBox> bbox_from_mask(const BinaryMask& mask) {
    validate_mask(mask);
    const auto height = static_cast<std::uint64_t>(mask.height);
    std::uint64_t min_row = height;
    std::uint64_t max_row = 0;
    std::uint64_t min_col = UINT64_MAX;
    std::uint64_t max_col = 0;
    bool any = false;
    std::uint64_t pos = 0;
    for (std::size_t i = 0; i < mask.counts.size(); ++i) {
        const std::uint64_t run = mask.counts[i];
        if (i % 2 == 1 && run > 0) {
            const std::uint64_t first = pos;
            const std::uint64_t last = pos + run - 1;
            const std::uint64_t first_col = first / height;
            const std::uint64_t last_col = last / height;
            any = true;
            min_col = std::min(min_col, first_col);
            max_col = std::max(max_col, last_col);
            if (first_col == last_col) {
                min_row = std::min(min_row, first % height);
                max_row = std::max(max_row, last % height);
            } else {
                // A run that wraps a column boundary touches both the bottom and top rows.
                min_row = 0;
                max_row = height - 1;
            }
        }
        pos += run;
    }
    if (!any) {
        return std::nullopt;
    }
    return BBox(static_cast<double>(min_col), static_cast<double>(min_row), static_cast<double>(max_col - min_col + 1),
                static_cast<double>(max_row - min_row + 1));
}

Json mask_to_json(const BinaryMask& mask) {
    return Json{{"size", {mask.height, mask.width}}, {"counts", mask.counts}};
}

BinaryMask mask_from_json(const Json& value) {
    if (!value.is_object() || !value.contains("size") || !value.contains("counts")) {
        throw ValidationError("RLE mask must be an object with 'size' and 'counts'");
    }
    const Json& size = value.at("size");
    const Json& counts = value.at("counts");
    if (!size.is_array() || size.size() != 2 || !size[0].is_number_integer() || !size[1].is_number_integer()) {
        throw ValidationError("RLE 'size' must be [height, width]");
    }
    if (!counts.is_array()) {
        throw ValidationError("RLE 'counts' must be an array (compressed RLE strings are not supported)");
    }
    BinaryMask mask;
    mask.height = size[0].get<int>();
    mask.width = size[1].get<int>();
    mask.counts.reserve(counts.size());
    for (const Json& c : counts) {
        if (!c.is_number_unsigned() && !(c.is_number_integer() && c.get<std::int64_t>() >= 0)) {
            throw ValidationError("RLE counts must be non-negative integers");
        }
        mask.counts.push_back(c.get<std::uint32_t>());
    }
    validate_mask(mask);
    return mask;
}

BinaryMask load_mask_file(const std::filesystem::path& path) {
    try {
        return mask_from_json(read_json_file(path));
    } catch (const ParseError&) {
        throw;
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void save_mask_file(const std::filesystem::path& path, const BinaryMask& mask) {
    write_file_text(path, mask_to_json(mask).dump() + "\n");
}

}  // namespace stamp
