#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace stamp {

/// Dense boolean grid, row-major, one byte per cell.
class Bitmap {
public:
    Bitmap() = default;
    Bitmap(int height, int width, bool fill = false);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return cells_.size(); }

    bool at(int row, int col) const { return cells_[index(row, col)] != 0; }
    void set(int row, int col, bool value) { cells_[index(row, col)] = value ? 1 : 0; }

    std::span<const std::uint8_t> cells() const noexcept { return cells_; }
    std::size_t count() const noexcept;

    bool operator==(const Bitmap&) const = default;

private:
    std::size_t index(int row, int col) const noexcept {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
    }

    int height_ = 0;
    int width_ = 0;
    std::vector<std::uint8_t> cells_;
};

}  // namespace stamp
