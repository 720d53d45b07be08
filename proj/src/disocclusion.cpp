#include "stamp/disocclusion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stamp/error.hpp"
#include "stamp/parallel.hpp"

namespace stamp {

namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

void check_frame(int t, int frames) {
    if (t < 0 || t >= frames) {
        std::ostringstream msg;
        msg << "frame " << t << " out of range [0, " << frames << ")";
        throw ValidationError(msg.str());
    }
}

}  // namespace

void DenseMaskParams::validate() const {
    auto unit = [](double v) { return v > 0.0 && v <= 1.0; };
    if (!unit(vis_threshold) || !unit(conf_threshold) || !(sigma > 0.0) || !(weight_threshold > 0.0) ||
        !std::isfinite(sigma) || !std::isfinite(weight_threshold)) {
        std::ostringstream msg;
        msg << "invalid dense mask parameters (vis " << vis_threshold << ", conf " << conf_threshold << ", sigma "
            << sigma << ", weight " << weight_threshold << ")";
        throw ValidationError(msg.str());
    }
}

std::vector<Point2> grid_points(int width, int height, int gx, int gy) {
    if (gx < 1 || gy < 1) throw ValidationError("grid dimensions must be at least 1x1");
    if (width <= 0 || height <= 0) throw ValidationError("grid image dimensions must be positive");
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(gx) * gy);
    for (int j = 0; j < gy; ++j) {
        for (int i = 0; i < gx; ++i) {
            pts.push_back({(i + 0.5) * width / gx, (j + 0.5) * height / gy});
        }
    }
    return pts;
}

Polygon convex_hull(std::span<const Point2> points) {
    if (points.empty()) throw ValidationError("convex hull of an empty point set");
    std::vector<Point2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Point2& a, const Point2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;

    // Andrew's monotone chain; popping on cross <= 0 drops collinear points.
    std::vector<Point2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

Polygon extreme_point_polygon(std::span<const Point2> points) {
    if (points.empty()) throw ValidationError("extreme-point polygon of an empty point set");
    auto [min_x, max_x] = std::minmax_element(points.begin(), points.end(),
                                              [](const Point2& a, const Point2& b) { return a.x < b.x; });
    auto [min_y, max_y] = std::minmax_element(points.begin(), points.end(),
                                              [](const Point2& a, const Point2& b) { return a.y < b.y; });
    const double x0 = min_x->x, x1 = max_x->x, y0 = min_y->y, y1 = max_y->y;
    if (x0 == x1 || y0 == y1) {
        const Point2 corners[] = {{x0, y0}, {x1, y1}};
        return convex_hull(corners);
    }
    return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

ValidityMask polygon_validity_mask(const Polygon& hull, int width, int height) {
    ValidityMask mask(height, width, false);
    if (hull.size() < 3) return mask;
    const std::size_t n = hull.size();
    for (int r = 0; r < height; ++r) {
        const double py = r + 0.5;
        for (int c = 0; c < width; ++c) {
            const Point2 p{c + 0.5, py};
            bool inside = true;
            for (std::size_t i = 0; i < n && inside; ++i) {
                inside = cross(hull[i], hull[(i + 1) % n], p) >= 0.0;
            }
            if (inside) mask.set(r, c, true);
        }
    }
    return mask;
}

ValidityMask track_validity_mask(const TrackGrid& tracks, int t, int width, int height, PolygonMode mode) {
    check_frame(t, tracks.frames);
    std::vector<Point2> visible;
    for (int n = 0; n < tracks.points; ++n) {
        const auto& p = tracks.at(t, n);
        if (p.visible) visible.push_back({p.x, p.y});
    }
    if (visible.empty()) return ValidityMask(height, width, false);
    const Polygon poly = mode == PolygonMode::ConvexHull ? convex_hull(visible) : extreme_point_polygon(visible);
    return polygon_validity_mask(poly, width, height);
}

int gaussian_radius(double sigma) {
    return static_cast<int>(std::ceil(3.0 * sigma));
}

DensityMap density_map(const FlowField& flow, int t, const DenseMaskParams& params) {
    params.validate();
    check_frame(t, flow.frames);
    const int H = flow.height;
    const int W = flow.width;

    std::vector<std::uint8_t> impulses(static_cast<std::size_t>(H) * W, 0);
    for (int r = 0; r < H; ++r) {
        for (int c = 0; c < W; ++c) {
            const std::size_t i = flow.pixel_index(t, r, c);
            if (!(flow.vis[i] >= params.vis_threshold && flow.conf[i] >= params.conf_threshold)) continue;
            const double x = std::clamp(std::nearbyint(c + static_cast<double>(flow.flow[2 * i])), 0.0, W - 1.0);
            const double y = std::clamp(std::nearbyint(r + static_cast<double>(flow.flow[2 * i + 1])), 0.0, H - 1.0);
            impulses[static_cast<std::size_t>(y) * W + static_cast<std::size_t>(x)] = 1;
        }
    }

    const int radius = gaussian_radius(params.sigma);
    std::vector<double> kernel(2 * radius + 1);
    for (int d = -radius; d <= radius; ++d) {
        kernel[d + radius] = std::exp(-(static_cast<double>(d) * d) / (2.0 * params.sigma * params.sigma));
    }

    std::vector<double> horizontal(static_cast<std::size_t>(H) * W, 0.0);
    parallel_for(static_cast<std::size_t>(H), [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            const std::uint8_t* row = &impulses[r * W];
            for (int c = 0; c < W; ++c) {
                double sum = 0.0;
                const int lo = std::max(0, c - radius);
                const int hi = std::min(W - 1, c + radius);
                for (int s = lo; s <= hi; ++s) {
                    if (row[s]) sum += kernel[s - c + radius];
                }
                horizontal[r * W + c] = sum;
            }
        }
    });

    DensityMap out{W, H, std::vector<double>(static_cast<std::size_t>(H) * W, 0.0)};
    parallel_for(static_cast<std::size_t>(H), [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            const int lo = std::max(0, static_cast<int>(r) - radius);
            const int hi = std::min(H - 1, static_cast<int>(r) + radius);
            for (int c = 0; c < W; ++c) {
                double sum = 0.0;
                for (int s = lo; s <= hi; ++s) {
                    sum += horizontal[static_cast<std::size_t>(s) * W + c] * kernel[s - static_cast<int>(r) + radius];
                }
                out.values[r * W + c] = sum;
            }
        }
    });
    return out;
}

ValidityMask dense_validity_mask(const FlowField& flow, int t, const DenseMaskParams& params) {
    const DensityMap density = density_map(flow, t, params);
    ValidityMask mask(density.height, density.width, false);
    for (int r = 0; r < density.height; ++r) {
        for (int c = 0; c < density.width; ++c) {
            if (density.at(r, c) >= params.weight_threshold) mask.set(r, c, true);
        }
    }
    return mask;
}

RgbImage apply_validity_mask(const RgbImage& image, const ValidityMask& mask) {
    if (image.width != mask.width() || image.height != mask.height()) {
        std::ostringstream msg;
        msg << "image is " << image.width << "x" << image.height << " but mask is " << mask.width() << "x"
            << mask.height();
        throw ValidationError(msg.str());
    }
    RgbImage out = image;
    for (int r = 0; r < image.height; ++r) {
        for (int c = 0; c < image.width; ++c) {
            if (!mask.at(r, c)) {
                const std::size_t i = (static_cast<std::size_t>(r) * image.width + c) * 3;
                out.pixels[i] = out.pixels[i + 1] = out.pixels[i + 2] = 0;
            }
        }
    }
    return out;
}

double invalid_fraction(const BBox& box, const ValidityMask& mask) {
    // Centre c + 0.5 in [x, x + w)  <=>  ceil(x - 0.5) <= c < ceil(x + w - 0.5).
    const auto first = [](double v) { return static_cast<long long>(std::ceil(v - 0.5)); };
    const long long c0 = std::max<long long>(0, first(box.x()));
    const long long c1 = std::min<long long>(mask.width(), first(box.right()));
    const long long r0 = std::max<long long>(0, first(box.y()));
    const long long r1 = std::min<long long>(mask.height(), first(box.bottom()));
    if (c1 <= c0 || r1 <= r0) {
        std::ostringstream msg;
        msg << "box [" << box.x() << ", " << box.y() << ", " << box.w() << ", " << box.h()
            << "] covers no pixel centre of a " << mask.width() << "x" << mask.height() << " mask";
        throw ValidationError(msg.str());
    }
    std::size_t invalid = 0;
    for (long long r = r0; r < r1; ++r) {
        for (long long c = c0; c < c1; ++c) {
            if (!mask.at(static_cast<int>(r), static_cast<int>(c))) ++invalid;
        }
    }
    return static_cast<double>(invalid) / static_cast<double>((c1 - c0) * (r1 - r0));
}

}  // namespace stamp
