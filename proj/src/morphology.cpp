#include "retina/morphology.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace retina {

namespace {

void require_odd(int w, int h, const char* what) {
    if (w < 1 || h < 1 || w % 2 == 0 || h % 2 == 0)
        throw std::invalid_argument(std::string(what) + ": kernel size must be odd and >= 1, got " +
                                    std::to_string(w) + "x" + std::to_string(h));
}

// Min or max over the element, one horizontal run at a time. Each run is a
// contiguous interval, so a per-row sliding extremum would also work; the
// direct scan is fast enough at fundus resolutions.
template <typename Pick>
GrayImage rank_filter(const GrayImage& img, const StructuringElement& se, std::uint8_t identity, Pick pick) {
    const int w = img.width();
    const int h = img.height();
    GrayImage out(w, h, identity);
    std::vector<std::uint8_t> padded;
    for (const auto& run : se.runs()) {
        const int lo = run.dx_begin;
        const int hi = run.dx_end;
        padded.resize(static_cast<std::size_t>(w + hi - lo));
        for (int y = 0; y < h; ++y) {
            const int sy = std::clamp(y + run.dy, 0, h - 1);
            const std::uint8_t* src = img.row(sy);
            // Edge-replicated copy of the source row covering [lo, w-1+hi].
            for (int i = 0; i < static_cast<int>(padded.size()); ++i)
                padded[static_cast<std::size_t>(i)] = src[std::clamp(i + lo, 0, w - 1)];
            std::uint8_t* dst = out.row(y);
            for (int x = 0; x < w; ++x) {
                std::uint8_t acc = dst[x];
                const std::uint8_t* p = padded.data() + x;
                for (int k = 0; k <= hi - lo; ++k) acc = pick(acc, p[k]);
                dst[x] = acc;
            }
        }
    }
    return out;
}

GrayImage erode(const GrayImage& img, const StructuringElement& se) {
    return rank_filter(img, se, 255, [](std::uint8_t a, std::uint8_t b) { return a < b ? a : b; });
}

GrayImage dilate(const GrayImage& img, const StructuringElement& se) {
    return rank_filter(img, se, 0, [](std::uint8_t a, std::uint8_t b) { return a > b ? a : b; });
}

}  // namespace

StructuringElement::StructuringElement(int width, int height, std::vector<std::uint8_t> cells)
    : width_(width), height_(height), cells_(std::move(cells)) {
    require_odd(width, height, "StructuringElement");
    if (cells_.size() != static_cast<std::size_t>(width * height))
        throw std::invalid_argument("StructuringElement: cell grid size mismatch");
    if (!contains(width / 2, height / 2))
        throw std::invalid_argument("StructuringElement: anchor cell must be set");
    const int cx = width / 2;
    const int cy = height / 2;
    for (int row = 0; row < height; ++row) {
        int col = 0;
        while (col < width) {
            if (!contains(col, row)) {
                ++col;
                continue;
            }
            const int begin = col;
            while (col < width && contains(col, row)) ++col;
            runs_.push_back({row - cy, begin - cx, col - 1 - cx});
        }
    }
}

int StructuringElement::count() const noexcept {
    return static_cast<int>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

bool StructuringElement::symmetric() const {
    for (int row = 0; row < height_; ++row)
        for (int col = 0; col < width_; ++col)
            if (contains(col, row) != contains(width_ - 1 - col, height_ - 1 - row)) return false;
    return true;
}

StructuringElement make_elliptical_se(int width, int height) {
    require_odd(width, height, "make_elliptical_se");
    const int a = (width - 1) / 2;
    const int b = (height - 1) / 2;
    std::vector<std::uint8_t> cells(static_cast<std::size_t>(width * height), 0);
    for (int dy = -b; dy <= b; ++dy) {
        for (int dx = -a; dx <= a; ++dx) {
            // Degenerate axes (a or b == 0) collapse to a line through the centre.
            const double u = a == 0 ? 0.0 : static_cast<double>(dx) / a;
            const double v = b == 0 ? 0.0 : static_cast<double>(dy) / b;
            if (u * u + v * v <= 1.0) cells[static_cast<std::size_t>((dy + b) * width + (dx + a))] = 1;
        }
    }
    return StructuringElement(width, height, std::move(cells));
}

StructuringElement make_rect_se(int width, int height) {
    require_odd(width, height, "make_rect_se");
    return StructuringElement(width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width * height), 1));
}

GrayImage morph(const GrayImage& img, MorphOp op, const StructuringElement& se) {
    switch (op) {
        case MorphOp::erode: return erode(img, se);
        case MorphOp::dilate: return dilate(img, se);
        case MorphOp::open: return dilate(erode(img, se), se);
        case MorphOp::close: return erode(dilate(img, se), se);
    }
    throw std::invalid_argument("morph: unknown operation");
}

const std::vector<KernelSize>& default_asf_schedule() {
    static const std::vector<KernelSize> schedule{{5, 5}, {7, 7}, {15, 15}, {11, 11}};
    return schedule;
}

GrayImage asf(const GrayImage& img, const std::vector<KernelSize>& schedule, AsfOrder order) {
    if (schedule.empty()) throw std::invalid_argument("asf: schedule must not be empty");
    for (const auto& [w, h] : schedule) require_odd(w, h, "asf");
    GrayImage current = img;
    for (const auto& [w, h] : schedule) {
        const auto se = make_elliptical_se(w, h);
        if (order == AsfOrder::close_open) {
            current = morph(morph(current, MorphOp::close, se), MorphOp::open, se);
        } else {
            current = morph(morph(current, MorphOp::open, se), MorphOp::close, se);
        }
    }
    return current;
}

}  // namespace retina
