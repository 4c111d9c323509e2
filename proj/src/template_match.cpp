#include "retina/template_match.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace retina {

GrayImage generate_disc_template(int side, int radius, std::uint8_t fg, std::uint8_t bg) {
    if (radius < 0) throw std::invalid_argument("generate_disc_template: negative radius");
    if (side < 2 * radius + 1)
        throw std::invalid_argument("generate_disc_template: radius " + std::to_string(radius) +
                                    " does not fit in side " + std::to_string(side));
    GrayImage blank(side, side, bg);
    return apply_circular_mask(blank, {side / 2, side / 2}, radius, fg);
}

ResponseMap match_template_nccoeff(const GrayImage& img, const GrayImage& tmpl) {
    const int W = img.width(), H = img.height();
    const int w = tmpl.width(), h = tmpl.height();
    if (w > W || h > H) throw std::invalid_argument("match_template_nccoeff: template larger than image");

    const auto n = static_cast<long long>(w) * h;
    long long tsum = 0, tsq = 0;
    for (std::uint8_t v : tmpl.data()) {
        tsum += v;
        tsq += static_cast<long long>(v) * v;
    }
    // n * sum(T'^2), exact in integers.
    const long long tvar_n = n * tsq - tsum * tsum;
    const double tmean = static_cast<double>(tsum) / static_cast<double>(n);
    std::vector<double> tprime(tmpl.size());
    for (std::size_t i = 0; i < tmpl.size(); ++i) tprime[i] = tmpl.data()[i] - tmean;

    // Integral images of I and I^2 with a zero row/column in front.
    const int iw = W + 1;
    std::vector<long long> s1(static_cast<std::size_t>(iw * (H + 1)), 0), s2(s1.size(), 0);
    for (int y = 0; y < H; ++y) {
        long long r1 = 0, r2 = 0;
        for (int x = 0; x < W; ++x) {
            const long long v = img.at(x, y);
            r1 += v;
            r2 += v * v;
            s1[static_cast<std::size_t>((y + 1) * iw + x + 1)] = s1[static_cast<std::size_t>(y * iw + x + 1)] + r1;
            s2[static_cast<std::size_t>((y + 1) * iw + x + 1)] = s2[static_cast<std::size_t>(y * iw + x + 1)] + r2;
        }
    }
    auto box = [&](const std::vector<long long>& s, int x, int y) {
        return s[static_cast<std::size_t>((y + h) * iw + x + w)] - s[static_cast<std::size_t>(y * iw + x + w)] -
               s[static_cast<std::size_t>((y + h) * iw + x)] + s[static_cast<std::size_t>(y * iw + x)];
    };

    ResponseMap map;
    map.width = W - w + 1;
    map.height = H - h + 1;
    map.scores.assign(static_cast<std::size_t>(map.width) * map.height, 0.0);
    if (tvar_n == 0) return map;

    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const long long sum = box(s1, x, y);
            const long long sq = box(s2, x, y);
            const long long ivar_n = n * sq - sum * sum;
            if (ivar_n == 0) continue;
            // sum(T' * I') == sum(T' * I) because T' sums to zero.
            double num = 0.0;
            for (int ty = 0; ty < h; ++ty) {
                const std::uint8_t* row = img.row(y + ty) + x;
                const double* trow = tprime.data() + static_cast<std::size_t>(ty) * w;
                for (int tx = 0; tx < w; ++tx) num += trow[tx] * row[tx];
            }
            // sqrt(sum T'^2 * sum I'^2) = sqrt(tvar_n * ivar_n) / n
            const double den = std::sqrt(static_cast<double>(tvar_n) * static_cast<double>(ivar_n)) / static_cast<double>(n);
            map.scores[static_cast<std::size_t>(y) * map.width + x] = std::clamp(num / den, -1.0, 1.0);
        }
    }
    return map;
}

Match best_match(const ResponseMap& map) {
    if (map.scores.empty() || map.width < 1 || map.height < 1)
        throw std::invalid_argument("best_match: empty response map");
    std::size_t best = 0;
    for (std::size_t i = 1; i < map.scores.size(); ++i)
        if (map.scores[i] > map.scores[best]) best = i;
    return {static_cast<int>(best % static_cast<std::size_t>(map.width)),
            static_cast<int>(best / static_cast<std::size_t>(map.width)), map.scores[best]};
}

}  // namespace retina
