#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "retina/image.hpp"

namespace retina {

/// Discrete Green's theorem: half the sum of x_i * y_{i+1} - x_{i+1} * y_i
/// over the closed chain. Positive for chains that are positively oriented in
/// pixel coordinates (x right, y down), i.e. clockwise on screen.
double shoelace_area(std::span<const Point> chain);

/// Closed chain of 8-neighbouring boundary pixels.
struct Contour {
    std::vector<Point> points;
    double signed_area = 0.0;
};

/// Outer boundary of every 8-connected foreground component, in raster order
/// of each component's first pixel. Chains are traced by Moore neighbour
/// following starting east, so outer contours have signed_area >= 0.
std::vector<Contour> find_contours(const BinaryMask& mask);

struct ComponentLabels {
    /// 0 = background, components numbered from 1 in raster order.
    std::vector<int> labels;
    /// sizes[i] is the pixel count of component i + 1.
    std::vector<std::size_t> sizes;
};

ComponentLabels label_components(const BinaryMask& mask);

/// Keeps the 8-connected components whose pixel count lies in [min_area, max_area].
BinaryMask filter_blobs(const BinaryMask& mask, std::size_t min_area = 0,
                        std::size_t max_area = std::numeric_limits<std::size_t>::max());

/// Rasterizes the contours as filled regions: chain pixels plus every pixel
/// whose centre lies inside the polygon through the chain.
BinaryMask fill_contours(const std::vector<Contour>& contours, int width, int height);

}  // namespace retina
