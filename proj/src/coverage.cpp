#include "stamp/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "stamp/error.hpp"
#include "stamp/parallel.hpp"

namespace stamp {

namespace {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

void require_same_dim(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
    if (a.dim != b.dim) {
        throw ValidationError("embedding dimension mismatch: " + std::to_string(a.dim) + " vs " + std::to_string(b.dim));
    }
}

}  // namespace

double l2_distance(std::span<const float> a, std::span<const float> b) noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

std::vector<double> knn_radii(const EmbeddingMatrix& d, int k) {
    if (k < 1) throw ValidationError("k must be at least 1");
    const std::size_t n = d.rows();
    if (n < static_cast<std::size_t>(k) + 1) {
        throw ValidationError("need at least k + 1 = " + std::to_string(k + 1) + " rows for k-NN radii, got " +
                              std::to_string(n));
    }
    std::vector<double> radii(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        std::vector<double> dist;
        dist.reserve(n - 1);
        for (std::size_t i = begin; i < end; ++i) {
            dist.clear();
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) dist.push_back(l2_distance(d.row(i), d.row(j)));
            }
            std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
            radii[i] = dist[k - 1];
        }
    });
    return radii;
}

double recall(const EmbeddingMatrix& u, const EmbeddingMatrix& d, const RecallParams& params) {
    require_same_dim(u, d);
    if (u.rows() == 0) throw ValidationError("recall of an empty evaluation set");
    const std::vector<double> radii = knn_radii(d, params.k);

    // Try the widest balls first; only the existence of a covering ball matters.
    std::vector<std::size_t> order(d.rows());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radii[a] > radii[b]; });

    std::vector<std::uint8_t> covered(u.rows(), 0);
    parallel_for(u.rows(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            for (std::size_t j : order) {
                if (l2_distance(u.row(i), d.row(j)) <= radii[j]) {
                    covered[i] = 1;
                    break;
                }
            }
        }
    });
    const auto hits = std::count(covered.begin(), covered.end(), std::uint8_t{1});
    return static_cast<double>(hits) / static_cast<double>(u.rows());
}

double kid_kernel(std::span<const float> x, std::span<const float> y) noexcept {
    double dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dot += static_cast<double>(x[i]) * static_cast<double>(y[i]);
    const double base = dot / static_cast<double>(x.size()) + 1.0;
    return base * base * base;
}

double mmd2_unbiased(const EmbeddingMatrix& x, const std::vector<std::size_t>& x_rows, const EmbeddingMatrix& y,
                     const std::vector<std::size_t>& y_rows) {
    require_same_dim(x, y);
    const std::size_t m = x_rows.size();
    if (m < 2 || y_rows.size() != m) throw ValidationError("MMD needs two equal subsets of at least 2 rows");

    CompensatedSum xx, yy, xy;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (i != j) {
                xx.add(kid_kernel(x.row(x_rows[i]), x.row(x_rows[j])));
                yy.add(kid_kernel(y.row(y_rows[i]), y.row(y_rows[j])));
            }
            xy.add(kid_kernel(x.row(x_rows[i]), y.row(y_rows[j])));
        }
    }
    const double md = static_cast<double>(m);
    return xx.value() / (md * (md - 1.0)) + yy.value() / (md * (md - 1.0)) - 2.0 * xy.value() / (md * md);
}

std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, SplitMix64& rng) {
    if (count > n) throw ValidationError("cannot draw " + std::to_string(count) + " of " + std::to_string(n));
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < count; ++i) {
        std::swap(idx[i], idx[i + rng.uniform(n - i)]);
    }
    idx.resize(count);
    return idx;
}

KidResult kid(const EmbeddingMatrix& x, const EmbeddingMatrix& y, const KidParams& params) {
    require_same_dim(x, y);
    if (params.subset_size < 2) throw ValidationError("KID subset_size must be at least 2");
    if (params.n_subsets < 1) throw ValidationError("KID n_subsets must be at least 1");
    const auto m = static_cast<std::size_t>(params.subset_size);
    if (m > x.rows() || m > y.rows()) {
        std::ostringstream msg;
        msg << "KID subset_size " << m << " exceeds set sizes (" << x.rows() << ", " << y.rows() << ")";
        throw ValidationError(msg.str());
    }

    SplitMix64 rng(params.seed);
    std::vector<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> draws;
    draws.reserve(params.n_subsets);
    for (int s = 0; s < params.n_subsets; ++s) {
        auto xs = sample_without_replacement(x.rows(), m, rng);
        auto ys = sample_without_replacement(y.rows(), m, rng);
        draws.emplace_back(std::move(xs), std::move(ys));
    }

    std::vector<double> values(draws.size());
    parallel_for(draws.size(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) values[s] = mmd2_unbiased(x, draws[s].first, y, draws[s].second);
    });

    CompensatedSum total;
    for (double v : values) total.add(v);
    KidResult result;
    result.mean = total.value() / static_cast<double>(values.size());
    CompensatedSum spread;
    for (double v : values) spread.add((v - result.mean) * (v - result.mean));
    result.std = std::sqrt(spread.value() / static_cast<double>(values.size()));
    return result;
}

}  // namespace stamp
