#pragma once

#include <vector>

#include "retina/image.hpp"

namespace retina {

/// Score grid with one entry per template placement (top-left corner).
struct ResponseMap {
    int width = 0;
    int height = 0;
    std::vector<double> scores;

    double at(int x, int y) const { return scores[static_cast<std::size_t>(y) * width + x]; }
};

/// side x side image of `bg` with a filled disc of `radius` around the centre.
GrayImage generate_disc_template(int side = 51, int radius = 22, std::uint8_t fg = 255, std::uint8_t bg = 0);

/// Normalized correlation coefficient of the template against every window:
///   R = sum(T' * I') / sqrt(sum(T'^2) * sum(I'^2))
/// with T' and I' the mean-subtracted template and window. A window or
/// template without variance scores 0.
ResponseMap match_template_nccoeff(const GrayImage& img, const GrayImage& tmpl);

struct Match {
    int x = 0;
    int y = 0;
    double score = 0.0;
};

/// Location of the maximum score, first in row-major order on ties.
Match best_match(const ResponseMap& map);

}  // namespace retina
