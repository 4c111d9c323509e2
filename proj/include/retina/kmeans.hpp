#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "retina/image.hpp"

namespace retina {

struct KMeansResult {
    /// Effective cluster count; smaller than requested when the image holds
    /// fewer distinct intensities than clusters.
    int k = 0;
    int requested_k = 0;
    std::vector<double> centers;
    /// Per-pixel cluster index, row-major like the source image.
    std::vector<int> labels;
    int width = 0;
    int height = 0;
    /// Sum over pixels of (center[label] - pixel)^2.
    double objective = 0.0;
    /// Objective after every assignment pass; non-increasing.
    std::vector<double> history;
    int iterations = 0;
};

struct KMeansOptions {
    int max_iter = 100;
    double tol = 1e-6;
    /// Extra runs from random initial centres; the lowest objective wins.
    int random_restarts = 0;
    std::uint64_t seed = 0;
    /// Also start Lloyd from the exact 1-D optimum of the intensity histogram
    /// and keep it when its objective is strictly lower. Scalar k-means only.
    bool exact_candidate = true;
};

/// Lloyd iterations on scalar intensities, seeded with k evenly spaced
/// quantiles of the intensity distribution. Nearest-centre ties go to the
/// lowest index. Centres come out in ascending order.
///
/// Quantile-seeded Lloyd can stall in a local minimum; with
/// `exact_candidate` a second run starts from the globally optimal partition
/// and the lower objective wins.
KMeansResult kmeans_intensity(const GrayImage& img, int k, const KMeansOptions& options = {});

/// Foreground where the pixel's centre is the maximum centre (ties toward the
/// higher label index).
BinaryMask brightest_cluster_mask(const KMeansResult& r);

/// Replaces each pixel by its rounded cluster centre.
GrayImage quantize(const KMeansResult& r);

/// Objective of an arbitrary labelling with per-cluster mean centres.
double kmeans_objective(const GrayImage& img, const std::vector<int>& labels, const std::vector<double>& centers);

/// Lloyd on RGB triplets; centres seeded from luma quantiles. `centers` holds
/// the luma of each colour centre so `brightest_cluster_mask` applies as is.
struct ColorKMeansResult {
    KMeansResult summary;
    std::vector<std::array<double, 3>> colors;
};

ColorKMeansResult kmeans_color(const RgbImage& img, int k, const KMeansOptions& options = {});

}  // namespace retina
