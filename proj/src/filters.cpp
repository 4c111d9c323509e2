#include "retina/filters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

namespace retina {

namespace {

constexpr int kBins = 256;

std::vector<int> tile_bounds(int extent, int tiles) {
    std::vector<int> bounds(static_cast<std::size_t>(tiles + 1));
    for (int i = 0; i <= tiles; ++i)
        bounds[static_cast<std::size_t>(i)] =
            static_cast<int>(static_cast<long long>(i) * extent / tiles);
    return bounds;
}

struct Blend {
    int lo;
    int hi;
    double frac;
};

// For every coordinate along one axis: the two neighbouring tiles whose
// centres bracket it and the weight of the upper one.
std::vector<Blend> tile_blend(int extent, const std::vector<int>& bounds) {
    const int tiles = static_cast<int>(bounds.size()) - 1;
    std::vector<double> centres(static_cast<std::size_t>(tiles));
    for (int i = 0; i < tiles; ++i)
        centres[static_cast<std::size_t>(i)] =
            0.5 * (bounds[static_cast<std::size_t>(i)] + bounds[static_cast<std::size_t>(i + 1)] - 1);
    std::vector<Blend> out(static_cast<std::size_t>(extent));
    int t = 0;
    for (int x = 0; x < extent; ++x) {
        if (x <= centres.front()) {
            out[static_cast<std::size_t>(x)] = {0, 0, 0.0};
        } else if (x >= centres.back()) {
            out[static_cast<std::size_t>(x)] = {tiles - 1, tiles - 1, 0.0};
        } else {
            while (centres[static_cast<std::size_t>(t + 1)] <= x) ++t;
            const double c0 = centres[static_cast<std::size_t>(t)];
            const double c1 = centres[static_cast<std::size_t>(t + 1)];
            out[static_cast<std::size_t>(x)] = {t, t + 1, (x - c0) / (c1 - c0)};
        }
    }
    return out;
}

}  // namespace

std::vector<std::uint8_t> clahe_tile_lut(const std::vector<int>& histogram, int tile_area, double clip_limit) {
    std::vector<int> hist = histogram;
    const int clip = std::max(1, static_cast<int>(clip_limit * tile_area / kBins));
    int excess = 0;
    for (int& h : hist) {
        if (h > clip) {
            excess += h - clip;
            h = clip;
        }
    }
    const int batch = excess / kBins;
    const int residual = excess - batch * kBins;
    for (int& h : hist) h += batch;
    if (residual > 0) {
        const int step = std::max(kBins / residual, 1);
        for (int i = 0, left = residual; i < kBins && left > 0; i += step, --left) ++hist[static_cast<std::size_t>(i)];
    }
    // round(cdf * 255 / area) in integers so exact halves round up reliably.
    std::vector<std::uint8_t> lut(kBins);
    const long long area = tile_area;
    long long cdf = 0;
    for (int i = 0; i < kBins; ++i) {
        cdf += hist[static_cast<std::size_t>(i)];
        lut[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>(std::clamp((2 * cdf * 255 + area) / (2 * area), 0LL, 255LL));
    }
    return lut;
}

GrayImage clahe(const GrayImage& img, double clip_limit, TileGrid grid) {
    if (grid.tiles_x < 1 || grid.tiles_y < 1)
        throw std::invalid_argument("clahe: tile grid must be at least 1x1");
    if (!(clip_limit > 0.0)) throw std::invalid_argument("clahe: clip limit must be positive");
    if (img.width() < grid.tiles_x || img.height() < grid.tiles_y)
        throw std::invalid_argument("clahe: image " + std::to_string(img.width()) + "x" +
                                    std::to_string(img.height()) + " is smaller than the tile grid");

    const auto xb = tile_bounds(img.width(), grid.tiles_x);
    const auto yb = tile_bounds(img.height(), grid.tiles_y);

    std::vector<std::vector<std::uint8_t>> luts(static_cast<std::size_t>(grid.tiles_x * grid.tiles_y));
    std::vector<int> hist(kBins);
    for (int ty = 0; ty < grid.tiles_y; ++ty) {
        for (int tx = 0; tx < grid.tiles_x; ++tx) {
            std::fill(hist.begin(), hist.end(), 0);
            const int x0 = xb[static_cast<std::size_t>(tx)], x1 = xb[static_cast<std::size_t>(tx + 1)];
            const int y0 = yb[static_cast<std::size_t>(ty)], y1 = yb[static_cast<std::size_t>(ty + 1)];
            for (int y = y0; y < y1; ++y) {
                const std::uint8_t* row = img.row(y);
                for (int x = x0; x < x1; ++x) ++hist[row[x]];
            }
            luts[static_cast<std::size_t>(ty * grid.tiles_x + tx)] =
                clahe_tile_lut(hist, (x1 - x0) * (y1 - y0), clip_limit);
        }
    }

    const auto bx = tile_blend(img.width(), xb);
    const auto by = tile_blend(img.height(), yb);
    GrayImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        const Blend& v = by[static_cast<std::size_t>(y)];
        const std::uint8_t* src = img.row(y);
        std::uint8_t* dst = out.row(y);
        for (int x = 0; x < img.width(); ++x) {
            const Blend& u = bx[static_cast<std::size_t>(x)];
            const std::uint8_t p = src[x];
            auto lut = [&](int tx, int ty) {
                return static_cast<double>(luts[static_cast<std::size_t>(ty * grid.tiles_x + tx)][p]);
            };
            const double top = lut(u.lo, v.lo) * (1.0 - u.frac) + lut(u.hi, v.lo) * u.frac;
            const double bottom = lut(u.lo, v.hi) * (1.0 - u.frac) + lut(u.hi, v.hi) * u.frac;
            dst[x] = static_cast<std::uint8_t>(
                std::clamp(std::lround(top * (1.0 - v.frac) + bottom * v.frac), 0L, 255L));
        }
    }
    return out;
}

GrayImage median_filter(const GrayImage& img, int k) {
    if (k < 1 || k % 2 == 0)
        throw std::invalid_argument("median_filter: window size must be odd and >= 1, got " + std::to_string(k));
    if (k == 1) return img;
    const int r = k / 2;
    const std::size_t mid = static_cast<std::size_t>(k * k / 2);
    GrayImage out(img.width(), img.height());
    std::vector<std::uint8_t> window(static_cast<std::size_t>(k * k));
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            std::size_t n = 0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) window[n++] = img.clamped(x + dx, y + dy);
            std::nth_element(window.begin(), window.begin() + static_cast<std::ptrdiff_t>(mid), window.end());
            out.at(x, y) = window[mid];
        }
    }
    return out;
}

double mean_intensity(const GrayImage& img) {
    const auto sum = std::accumulate(img.data().begin(), img.data().end(), std::uint64_t{0});
    return static_cast<double>(sum) / static_cast<double>(img.size());
}

BinaryMask threshold_above(const GrayImage& img, double threshold) {
    BinaryMask out(img.width(), img.height());
    std::transform(img.data().begin(), img.data().end(), out.data().begin(),
                   [threshold](std::uint8_t v) { return static_cast<std::uint8_t>(v > threshold ? 1 : 0); });
    return out;
}

BinaryMask threshold_mean(const GrayImage& img, double offset) {
    return threshold_above(img, mean_intensity(img) + offset);
}

std::vector<double> gaussian_blur(const GrayImage& img, double sigma) {
    const int w = img.width();
    const int h = img.height();
    std::vector<double> src(img.data().begin(), img.data().end());
    if (sigma <= 0.0) return src;

    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    for (int i = -radius; i <= radius; ++i)
        kernel[static_cast<std::size_t>(i + radius)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    const double norm = std::accumulate(kernel.begin(), kernel.end(), 0.0);
    for (double& k : kernel) k /= norm;

    std::vector<double> tmp(src.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[static_cast<std::size_t>(i + radius)] *
                       src[static_cast<std::size_t>(y * w + std::clamp(x + i, 0, w - 1))];
            tmp[static_cast<std::size_t>(y * w + x)] = acc;
        }
    }
    std::vector<double> out(src.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = -radius; i <= radius; ++i)
                acc += kernel[static_cast<std::size_t>(i + radius)] *
                       tmp[static_cast<std::size_t>(std::clamp(y + i, 0, h - 1) * w + x)];
            out[static_cast<std::size_t>(y * w + x)] = acc;
        }
    }
    return out;
}

BinaryMask canny(const GrayImage& img, const CannyParams& params) {
    if (params.low < 0.0 || params.low > params.high)
        throw std::invalid_argument("canny: thresholds must satisfy 0 <= low <= high");
    const int w = img.width();
    const int h = img.height();
    const auto smooth = gaussian_blur(img, params.sigma);
    auto s = [&](int x, int y) {
        return smooth[static_cast<std::size_t>(std::clamp(y, 0, h - 1) * w + std::clamp(x, 0, w - 1))];
    };

    std::vector<double> mag(smooth.size()), gxs(smooth.size()), gys(smooth.size());
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double gx = (s(x + 1, y - 1) + 2.0 * s(x + 1, y) + s(x + 1, y + 1)) -
                              (s(x - 1, y - 1) + 2.0 * s(x - 1, y) + s(x - 1, y + 1));
            const double gy = (s(x - 1, y + 1) + 2.0 * s(x, y + 1) + s(x + 1, y + 1)) -
                              (s(x - 1, y - 1) + 2.0 * s(x, y - 1) + s(x + 1, y - 1));
            const std::size_t i = static_cast<std::size_t>(y * w + x);
            mag[i] = std::hypot(gx, gy);
            gxs[i] = gx;
            gys[i] = gy;
        }
    }

    auto m = [&](int x, int y) {
        return (x < 0 || y < 0 || x >= w || y >= h) ? 0.0 : mag[static_cast<std::size_t>(y * w + x)];
    };
    // Magnitude one step along (ux, uy), where the larger component is +-1:
    // linear interpolation between the two pixels bracketing that point.
    auto along = [&](int x, int y, double ux, double uy) {
        if (std::abs(ux) >= std::abs(uy)) {
            const int sx = ux > 0 ? 1 : -1;
            const int sy = uy > 0 ? 1 : -1;
            const double f = std::abs(uy);
            return (1.0 - f) * m(x + sx, y) + f * m(x + sx, y + sy);
        }
        const int sx = ux > 0 ? 1 : -1;
        const int sy = uy > 0 ? 1 : -1;
        const double f = std::abs(ux);
        return (1.0 - f) * m(x, y + sy) + f * m(x + sx, y + sy);
    };

    // 0 = suppressed, 1 = weak, 2 = strong
    std::vector<std::uint8_t> cls(smooth.size(), 0);
    std::vector<Point> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y * w + x);
            const double v = mag[i];
            if (v <= params.low) continue;
            const double scale = std::max(std::abs(gxs[i]), std::abs(gys[i]));
            const double ux = gxs[i] / scale, uy = gys[i] / scale;
            if (!(v > along(x, y, -ux, -uy) && v >= along(x, y, ux, uy))) continue;
            if (v > params.high) {
                cls[i] = 2;
                stack.push_back({x, y});
            } else {
                cls[i] = 1;
            }
        }
    }

    BinaryMask out(w, h);
    for (const Point& p : stack) out.at(p.x, p.y) = 1;
    while (!stack.empty()) {
        const Point p = stack.back();
        stack.pop_back();
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int nx = p.x + dx;
                const int ny = p.y + dy;
                if (!out.contains(nx, ny)) continue;
                const std::size_t j = static_cast<std::size_t>(ny * w + nx);
                if (cls[j] == 1 && !out.at(nx, ny)) {
                    out.at(nx, ny) = 1;
                    stack.push_back({nx, ny});
                }
            }
        }
    }
    return out;
}

}  // namespace retina
