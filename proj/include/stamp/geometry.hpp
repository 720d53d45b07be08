#pragma once

#include <optional>
#include <vector>

namespace stamp {

/// Axis-aligned box in pixel units, COCO [x, y, w, h] layout.
/// Construction rejects negative origins and zero or negative extents.
class BBox {
public:
    BBox(double x, double y, double w, double h);

    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }
    double w() const noexcept { return w_; }
    double h() const noexcept { return h_; }
    double right() const noexcept { return x_ + w_; }
    double bottom() const noexcept { return y_ + h_; }
    double area() const noexcept { return w_ * h_; }

    /// Intersection with [0, width] x [0, height]; absent if nothing of positive area remains.
    std::optional<BBox> clamped(double width, double height) const;

    bool operator==(const BBox&) const = default;

private:
    double x_;
    double y_;
    double w_;
    double h_;
};

/// Intersection over union; 0 for disjoint boxes.
double iou(const BBox& a, const BBox& b) noexcept;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const Point2&) const = default;
};

using Polygon = std::vector<Point2>;

}  // namespace stamp
