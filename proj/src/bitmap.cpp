#include "stamp/bitmap.hpp"

#include <algorithm>
#include <sstream>

#include "stamp/error.hpp"

namespace stamp {

Bitmap::Bitmap(int height, int width, bool fill) : height_(height), width_(width) {
    if (height <= 0 || width <= 0) {
        std::ostringstream msg;
        msg << "bitmap dimensions must be positive, got " << height << "x" << width;
        throw ValidationError(msg.str());
    }
    cells_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill ? 1 : 0);
}

std::size_t Bitmap::count() const noexcept {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

}  // namespace stamp
