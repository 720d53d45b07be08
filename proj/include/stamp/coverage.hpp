#pragma once

#include <cstdint>
#include <vector>

#include "stamp/rng.hpp"
#include "stamp/tensor_io.hpp"

namespace stamp {

struct RecallParams {
    int k = 3;
};

struct KidParams {
    int subset_size = 1000;
    int n_subsets = 100;
    std::uint64_t seed = 0;
};

struct KidResult {
    double mean = 0.0;
    double std = 0.0;  // population std over subsets
};

/// sqrt of the sum of squared coordinate differences, accumulated in double in
/// dimension order. Every distance in this module goes through this function.
double l2_distance(std::span<const float> a, std::span<const float> b) noexcept;

/// Distance from each row to its k-th nearest *other* row (self excluded).
/// Requires rows >= k + 1.
std::vector<double> knn_radii(const EmbeddingMatrix& d, int k);

// Coverage recall of U by D: the fraction of rows u in U for which some row d
// in D satisfies l2(u, d) <= radius(d), radius as in knn_radii.
double recall(const EmbeddingMatrix& u, const EmbeddingMatrix& d, const RecallParams& params);

/// Polynomial kernel (x.y / D + 1)^3.
double kid_kernel(std::span<const float> x, std::span<const float> y) noexcept;

// Unbiased MMD^2 between the selected rows of x and y (equal subset sizes m >= 2):
//   1/(m(m-1)) sum_{i!=j} k(x_i, x_j) + 1/(m(m-1)) sum_{i!=j} k(y_i, y_j) - 2/m^2 sum_{i,j} k(x_i, y_j)
// Sums use Neumaier compensation in a fixed order. The estimate may be negative.
double mmd2_unbiased(const EmbeddingMatrix& x, const std::vector<std::size_t>& x_rows, const EmbeddingMatrix& y,
                     const std::vector<std::size_t>& y_rows);

/// `count` distinct indices from [0, n): partial Fisher-Yates driven by rng.
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t count, SplitMix64& rng);

// Kernel Inception Distance. For each of n_subsets draws (x subset first, then
// y subset, from one generator seeded with params.seed) computes mmd2_unbiased
// and returns mean and population std. No clamping at zero.
KidResult kid(const EmbeddingMatrix& x, const EmbeddingMatrix& y, const KidParams& params);

}  // namespace stamp
