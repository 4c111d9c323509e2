#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "retina/image.hpp"
#include "retina/pipelines.hpp"

namespace retina::eval {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept;
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Counts over the pixels where `roi` is set, or over all pixels without one.
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt,
                          const std::optional<BinaryMask>& roi = std::nullopt);

/// Percentages for accuracy/specificity/sensitivity, a ratio for dice.
/// A ratio whose denominator is zero is left empty.
struct MetricsReport {
    std::optional<double> accuracy;
    std::optional<double> specificity;
    std::optional<double> sensitivity;
    std::optional<double> dice;
};

MetricsReport metrics(const ConfusionCounts& c);

/// Mean of each metric over the reports where it is defined.
struct MeanReport {
    MetricsReport mean;
    /// Reports contributing to each mean.
    int accuracy_n = 0, specificity_n = 0, sensitivity_n = 0, dice_n = 0;
};

MeanReport mean_of(const std::vector<MetricsReport>& reports);

struct DiscReference {
    Point center;
    double radius = 0.0;
};

/// Centroid and equal-area radius of a ground-truth disc mask.
std::optional<DiscReference> disc_from_mask(const BinaryMask& mask);

/// Fallback tolerance when no disc mask is available: 5% of the image diagonal.
double default_hit_tolerance(int width, int height);

/// Euclidean distance between od.center_full and gt_center is at most tol_radius.
bool od_hit(const OdLocation& pred, Point gt_center, double tol_radius);

}  // namespace retina::eval
