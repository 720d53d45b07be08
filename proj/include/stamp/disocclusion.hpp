#pragma once

#include <span>
#include <vector>

#include "stamp/bitmap.hpp"
#include "stamp/geometry.hpp"
#include "stamp/image.hpp"
#include "stamp/tensor_io.hpp"

namespace stamp {

/// Per-frame pixel mask; true marks content tracked from the conditioning image,
/// false marks newly revealed (disoccluded) content.
class ValidityMask : public Bitmap {
public:
    using Bitmap::Bitmap;
    explicit ValidityMask(Bitmap bits) : Bitmap(std::move(bits)) {}
};

struct DenseMaskParams {
    double vis_threshold = 0.9;
    double conf_threshold = 0.1;
    double sigma = 8.0;             // Gaussian std, pixels
    double weight_threshold = 0.5;  // effective count of nearby tracked points

    /// Throws ValidationError unless sigma, weight_threshold > 0 and both thresholds lie in (0, 1].
    void validate() const;
};

enum class PolygonMode {
    ConvexHull,     // hull of the visible tracked points
    ExtremePoints,  // axis-aligned rectangle through the min/max x and y of the visible points
};

/// Cell-centre grid: x_i = (i + 0.5) W / gx, y_j = (j + 0.5) H / gy, row-major (j outer).
std::vector<Point2> grid_points(int width, int height, int gx, int gy);

/// Counter-clockwise hull (positive signed area in x/y coordinates), starting at the
/// lowest-x, then lowest-y vertex. Collinear boundary points are dropped; all-equal
/// input yields one vertex and collinear input yields the two endpoints.
Polygon convex_hull(std::span<const Point2> points);

/// Rectangle spanned by the extreme coordinates, CCW; degenerates like convex_hull.
Polygon extreme_point_polygon(std::span<const Point2> points);

/// Pixel (c, r) is valid iff its centre (c + 0.5, r + 0.5) lies inside or on the
/// polygon. Polygons with fewer than three vertices produce an all-invalid mask.
ValidityMask polygon_validity_mask(const Polygon& hull, int width, int height);

/// Polygon mask from the points visible at frame t of a sparse track grid.
ValidityMask track_validity_mask(const TrackGrid& tracks, int t, int width, int height,
                                 PolygonMode mode = PolygonMode::ConvexHull);

/// Truncation radius of the Gaussian window, ceil(3 sigma).
int gaussian_radius(double sigma);

/// Density of tracked points landing near each pixel of frame t.
struct DensityMap {
    int width = 0;
    int height = 0;
    std::vector<double> values;  // row-major

    double at(int row, int col) const { return values[static_cast<std::size_t>(row) * width + col]; }
};

// Dense disocclusion: a source pixel contributes when vis >= vis_threshold and
// conf >= conf_threshold. It lands at (col + dx, row + dy) rounded to nearest
// (ties to even) and clamped into the frame, setting that pixel of an impulse
// image to 1. The impulse image is convolved with an unnormalized Gaussian
// (peak 1) over the square window |dx|, |dy| <= ceil(3 sigma), zero padded.
// The separable passes have a fixed summation order, so results do not depend
// on the worker count.
DensityMap density_map(const FlowField& flow, int t, const DenseMaskParams& params);

/// density >= weight_threshold.
ValidityMask dense_validity_mask(const FlowField& flow, int t, const DenseMaskParams& params);

/// Invalid pixels become (0, 0, 0); valid pixels are copied unchanged.
RgbImage apply_validity_mask(const RgbImage& image, const ValidityMask& mask);

/// Share of invalid pixels among those whose centres fall in [x, x+w) x [y, y+h),
/// restricted to the mask. Throws ValidationError when no pixel centre is covered.
double invalid_fraction(const BBox& box, const ValidityMask& mask);

}  // namespace stamp
