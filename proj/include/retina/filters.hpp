#pragma once

#include <vector>

#include "retina/image.hpp"

namespace retina {

struct TileGrid {
    int tiles_x = 8;
    int tiles_y = 8;
};

/// Contrast limited adaptive histogram equalization.
///
/// The image is cut into tiles_x * tiles_y tiles whose bounds are
/// floor(i * extent / tiles). Each tile histogram is clipped at
/// max(1, floor(clip_limit * tile_area / 256)) counts and the excess is spread
/// uniformly over all bins (remainder to every step-th bin from 0). The
/// resulting lookup tables are blended bilinearly between tile centres.
GrayImage clahe(const GrayImage& img, double clip_limit = 2.0, TileGrid grid = {});

/// The per-tile lookup table used by `clahe`, exposed for testing.
std::vector<std::uint8_t> clahe_tile_lut(const std::vector<int>& histogram, int tile_area, double clip_limit);

/// k*k median with edge replication. k must be odd.
GrayImage median_filter(const GrayImage& img, int k);

/// Foreground where pixel > mean(img) + offset.
BinaryMask threshold_mean(const GrayImage& img, double offset = 0.0);
BinaryMask threshold_above(const GrayImage& img, double threshold);
double mean_intensity(const GrayImage& img);

/// Separable Gaussian smoothing kept in floating point; radius ceil(3 sigma).
std::vector<double> gaussian_blur(const GrayImage& img, double sigma);

struct CannyParams {
    double low = 50.0;
    double high = 150.0;
    double sigma = 1.4;
};

/// Gaussian smoothing, Sobel gradients (L2 magnitude), non-maximum
/// suppression against the magnitude interpolated one pixel either way along
/// the gradient, hysteresis with 8-connectivity.
BinaryMask canny(const GrayImage& img, const CannyParams& params = {});

}  // namespace retina
