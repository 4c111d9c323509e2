#include "retina/image.hpp"

#include <algorithm>
#include <cmath>

namespace retina {

namespace {

template <typename A, typename B>
void require_same_shape(const A& a, const B& b, const char* what) {
    if (!a.same_shape(b))
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a.width()) + "x" + std::to_string(a.height()) +
                                    " vs " + std::to_string(b.width()) + "x" +
                                    std::to_string(b.height()) + ")");
}

struct Tap {
    int lo;
    int hi;
    double frac;
};

// Pixel-centre aligned source coordinates for one output axis.
std::vector<Tap> bilinear_taps(int src, int dst) {
    std::vector<Tap> taps(static_cast<std::size_t>(dst));
    const double scale = static_cast<double>(src) / dst;
    for (int i = 0; i < dst; ++i) {
        double s = (i + 0.5) * scale - 0.5;
        s = std::clamp(s, 0.0, static_cast<double>(src - 1));
        const int lo = static_cast<int>(std::floor(s));
        const int hi = std::min(lo + 1, src - 1);
        taps[static_cast<std::size_t>(i)] = {lo, hi, s - lo};
    }
    return taps;
}

template <typename Img, typename Get, typename Put>
void bilinear_into(const Img& src, Img& dst, Get get, Put put) {
    const auto xs = bilinear_taps(src.width(), dst.width());
    const auto ys = bilinear_taps(src.height(), dst.height());
    for (int y = 0; y < dst.height(); ++y) {
        const Tap& ty = ys[static_cast<std::size_t>(y)];
        for (int x = 0; x < dst.width(); ++x) {
            const Tap& tx = xs[static_cast<std::size_t>(x)];
            put(dst.at(x, y), [&](auto channel) {
                const double top = get(src.at(tx.lo, ty.lo), channel) * (1.0 - tx.frac) +
                                   get(src.at(tx.hi, ty.lo), channel) * tx.frac;
                const double bottom = get(src.at(tx.lo, ty.hi), channel) * (1.0 - tx.frac) +
                                      get(src.at(tx.hi, ty.hi), channel) * tx.frac;
                const double v = top * (1.0 - ty.frac) + bottom * ty.frac;
                return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            });
        }
    }
}

template <typename Img, typename V>
Img circle_fill(const Img& img, Point center, double radius, V fill) {
    Img out = img;
    if (radius < 0.0) throw std::invalid_argument("apply_circular_mask: negative radius");
    const double r2 = radius * radius;
    const int reach = static_cast<int>(std::floor(radius));
    const int y0 = std::max(0, center.y - reach);
    const int y1 = std::min(img.height() - 1, center.y + reach);
    const int x0 = std::max(0, center.x - reach);
    const int x1 = std::min(img.width() - 1, center.x + reach);
    for (int y = y0; y <= y1; ++y) {
        const double dy = y - center.y;
        for (int x = x0; x <= x1; ++x) {
            const double dx = x - center.x;
            if (dx * dx + dy * dy <= r2) out.at(x, y) = fill;
        }
    }
    return out;
}

}  // namespace

std::size_t count_foreground(const BinaryMask& mask) {
    return static_cast<std::size_t>(
        std::count_if(mask.data().begin(), mask.data().end(), [](std::uint8_t v) { return v != 0; }));
}

std::tuple<GrayImage, GrayImage, GrayImage> split_channels(const RgbImage& img) {
    GrayImage r(img.width(), img.height()), g(img.width(), img.height()), b(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i) {
        const Rgb& p = img.data()[i];
        r.data()[i] = p.r;
        g.data()[i] = p.g;
        b.data()[i] = p.b;
    }
    return {std::move(r), std::move(g), std::move(b)};
}

RgbImage merge_channels(const GrayImage& r, const GrayImage& g, const GrayImage& b) {
    require_same_shape(r, g, "merge_channels");
    require_same_shape(r, b, "merge_channels");
    RgbImage out(r.width(), r.height());
    for (std::size_t i = 0; i < out.size(); ++i)
        out.data()[i] = Rgb{r.data()[i], g.data()[i], b.data()[i]};
    return out;
}

GrayImage green_channel(const RgbImage& img) {
    GrayImage g(img.width(), img.height());
    std::transform(img.data().begin(), img.data().end(), g.data().begin(),
                   [](const Rgb& p) { return p.g; });
    return g;
}

GrayImage to_gray(const RgbImage& img) {
    GrayImage out(img.width(), img.height());
    std::transform(img.data().begin(), img.data().end(), out.data().begin(), [](const Rgb& p) {
        // Weights scaled by 1000 so the rounding is exact in integers.
        const int v = (299 * p.r + 587 * p.g + 114 * p.b + 500) / 1000;
        return static_cast<std::uint8_t>(std::min(v, 255));
    });
    return out;
}

GrayImage resize_bilinear(const GrayImage& img, int width, int height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("resize_bilinear: target dimensions must be positive");
    GrayImage out(width, height);
    bilinear_into(
        img, out, [](std::uint8_t p, int) { return static_cast<double>(p); },
        [](std::uint8_t& dst, auto sample) { dst = sample(0); });
    return out;
}

RgbImage resize_bilinear(const RgbImage& img, int width, int height) {
    if (width < 1 || height < 1)
        throw std::invalid_argument("resize_bilinear: target dimensions must be positive");
    RgbImage out(width, height);
    bilinear_into(
        img, out,
        [](const Rgb& p, int c) { return static_cast<double>(c == 0 ? p.r : (c == 1 ? p.g : p.b)); },
        [](Rgb& dst, auto sample) { dst = Rgb{sample(0), sample(1), sample(2)}; });
    return out;
}

GrayImage subtract_saturating(const GrayImage& a, const GrayImage& b) {
    require_same_shape(a, b, "subtract_saturating");
    GrayImage out(a.width(), a.height());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int d = static_cast<int>(a.data()[i]) - static_cast<int>(b.data()[i]);
        out.data()[i] = static_cast<std::uint8_t>(d > 0 ? d : 0);
    }
    return out;
}

BinaryMask logical_or(const BinaryMask& a, const BinaryMask& b) {
    require_same_shape(a, b, "logical_or");
    BinaryMask out(a.width(), a.height());
    for (std::size_t i = 0; i < a.size(); ++i)
        out.data()[i] = (a.data()[i] || b.data()[i]) ? 1 : 0;
    return out;
}

BinaryMask logical_and(const BinaryMask& a, const BinaryMask& b) {
    require_same_shape(a, b, "logical_and");
    BinaryMask out(a.width(), a.height());
    for (std::size_t i = 0; i < a.size(); ++i)
        out.data()[i] = (a.data()[i] && b.data()[i]) ? 1 : 0;
    return out;
}

GrayImage apply_circular_mask(const GrayImage& img, Point center, double radius, std::uint8_t fill) {
    return circle_fill(img, center, radius, fill);
}

BinaryMask apply_circular_mask(const BinaryMask& mask, Point center, double radius, bool fill) {
    return circle_fill(mask, center, radius, static_cast<std::uint8_t>(fill ? 1 : 0));
}

GrayImage mask_to_gray(const BinaryMask& mask) {
    GrayImage out(mask.width(), mask.height());
    std::transform(mask.data().begin(), mask.data().end(), out.data().begin(),
                   [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 255 : 0); });
    return out;
}

BinaryMask gray_to_mask(const GrayImage& img) {
    BinaryMask out(img.width(), img.height());
    std::transform(img.data().begin(), img.data().end(), out.data().begin(),
                   [](std::uint8_t v) { return static_cast<std::uint8_t>(v ? 1 : 0); });
    return out;
}

}  // namespace retina
