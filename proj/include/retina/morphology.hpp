#pragma once

#include <utility>
#include <vector>

#include "retina/image.hpp"

namespace retina {

/// Flat elliptical neighbourhood. Cell (dx, dy) relative to the centre is set
/// iff (dx/a)^2 + (dy/b)^2 <= 1 with a = (w-1)/2, b = (h-1)/2.
class StructuringElement {
public:
    StructuringElement(int width, int height, std::vector<std::uint8_t> cells);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    Point anchor() const noexcept { return {width_ / 2, height_ / 2}; }
    bool contains(int col, int row) const { return cells_[static_cast<std::size_t>(row * width_ + col)] != 0; }
    int count() const noexcept;
    bool symmetric() const;

    /// Each set row as a horizontal run [dx_begin, dx_end] at offset dy.
    struct Run {
        int dy;
        int dx_begin;
        int dx_end;
    };
    const std::vector<Run>& runs() const noexcept { return runs_; }

private:
    int width_;
    int height_;
    std::vector<std::uint8_t> cells_;
    std::vector<Run> runs_;
};

StructuringElement make_elliptical_se(int width, int height);
/// Full rectangle; used for the box examples in tests and as a general utility.
StructuringElement make_rect_se(int width, int height);

enum class MorphOp { erode, dilate, open, close };

/// Flat greyscale morphology with edge-replicated borders.
GrayImage morph(const GrayImage& img, MorphOp op, const StructuringElement& se);

enum class AsfOrder { close_open, open_close };

using KernelSize = std::pair<int, int>;

const std::vector<KernelSize>& default_asf_schedule();

/// Alternate sequential filter: for each schedule entry, a closing followed by
/// an opening (or the reverse) with the elliptical element of that size.
GrayImage asf(const GrayImage& img, const std::vector<KernelSize>& schedule,
              AsfOrder order = AsfOrder::close_open);

}  // namespace retina
