#include "stamp/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stamp/error.hpp"

namespace stamp {

BBox::BBox(double x, double y, double w, double h) : x_(x), y_(y), w_(w), h_(h) {
    if (!(std::isfinite(x) && std::isfinite(y) && std::isfinite(w) && std::isfinite(h)) || x < 0.0 || y < 0.0 ||
        w <= 0.0 || h <= 0.0) {
        std::ostringstream msg;
        msg << "invalid bbox [" << x << ", " << y << ", " << w << ", " << h << "]";
        throw ValidationError(msg.str());
    }
}

std::optional<BBox> BBox::clamped(double width, double height) const {
    double x0 = std::min(x_, width);
    double y0 = std::min(y_, height);
    double x1 = std::min(right(), width);
    double y1 = std::min(bottom(), height);
    if (x1 - x0 <= 0.0 || y1 - y0 <= 0.0) {
        return std::nullopt;
    }
    return BBox(x0, y0, x1 - x0, y1 - y0);
}

double iou(const BBox& a, const BBox& b) noexcept {
    double iw = std::min(a.right(), b.right()) - std::max(a.x(), b.x());
    double ih = std::min(a.bottom(), b.bottom()) - std::max(a.y(), b.y());
    if (iw <= 0.0 || ih <= 0.0) {
        return 0.0;
    }
    double inter = iw * ih;
    double uni = a.area() + b.area() - inter;
    return std::clamp(inter / uni, 0.0, 1.0);
}

}  // namespace stamp
