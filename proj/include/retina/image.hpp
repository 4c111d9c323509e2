#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace retina {

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

struct Point {
    int x = 0;
    int y = 0;

    friend bool operator==(const Point&, const Point&) = default;
};

/// Dense row-major pixel grid. The tag keeps grayscale images and binary
/// masks apart at the type level even though both store one byte per pixel.
template <typename Pixel, typename Tag>
class Image {
public:
    using pixel_type = Pixel;

    Image() = default;

    Image(int width, int height, Pixel fill = Pixel{})
        : width_(width), height_(height) {
        if (width < 1 || height < 1)
            throw std::invalid_argument("image dimensions must be positive, got " +
                                        std::to_string(width) + "x" + std::to_string(height));
        data_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    Image(int width, int height, std::vector<Pixel> data)
        : width_(width), height_(height), data_(std::move(data)) {
        if (width < 1 || height < 1)
            throw std::invalid_argument("image dimensions must be positive");
        if (data_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
            throw std::invalid_argument("pixel buffer length does not match width*height");
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    Pixel& at(int x, int y) { return data_[index(x, y)]; }
    const Pixel& at(int x, int y) const { return data_[index(x, y)]; }

    /// Edge-replicated read: coordinates outside the grid clamp to the border.
    const Pixel& clamped(int x, int y) const {
        x = x < 0 ? 0 : (x >= width_ ? width_ - 1 : x);
        y = y < 0 ? 0 : (y >= height_ ? height_ - 1 : y);
        return data_[index(x, y)];
    }

    bool contains(int x, int y) const noexcept {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    Pixel* row(int y) { return data_.data() + static_cast<std::size_t>(y) * width_; }
    const Pixel* row(int y) const { return data_.data() + static_cast<std::size_t>(y) * width_; }

    std::vector<Pixel>& data() noexcept { return data_; }
    const std::vector<Pixel>& data() const noexcept { return data_; }

    bool same_shape(const Image& other) const noexcept {
        return width_ == other.width_ && height_ == other.height_;
    }

    template <typename P2, typename T2>
    bool same_shape(const Image<P2, T2>& other) const noexcept {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<Pixel> data_;
};

struct RgbTag {};
struct GrayTag {};
struct MaskTag {};

using RgbImage = Image<Rgb, RgbTag>;
using GrayImage = Image<std::uint8_t, GrayTag>;
/// Foreground pixels hold 1, background 0.
using BinaryMask = Image<std::uint8_t, MaskTag>;

std::size_t count_foreground(const BinaryMask& mask);

// Channel and colour operations.
std::tuple<GrayImage, GrayImage, GrayImage> split_channels(const RgbImage& img);
RgbImage merge_channels(const GrayImage& r, const GrayImage& g, const GrayImage& b);
GrayImage green_channel(const RgbImage& img);
/// ITU-R 601 luma, rounded to nearest.
GrayImage to_gray(const RgbImage& img);

GrayImage resize_bilinear(const GrayImage& img, int width, int height);
RgbImage resize_bilinear(const RgbImage& img, int width, int height);

/// max(a - b, 0) per pixel.
GrayImage subtract_saturating(const GrayImage& a, const GrayImage& b);
BinaryMask logical_or(const BinaryMask& a, const BinaryMask& b);
BinaryMask logical_and(const BinaryMask& a, const BinaryMask& b);

/// Sets every pixel within Euclidean distance `radius` of `center` to `fill`.
/// Parts of the circle outside the image are ignored.
GrayImage apply_circular_mask(const GrayImage& img, Point center, double radius, std::uint8_t fill);
BinaryMask apply_circular_mask(const BinaryMask& mask, Point center, double radius, bool fill);

/// Expands a 0/1 mask to 0/255 for storage or display.
GrayImage mask_to_gray(const BinaryMask& mask);
/// Any nonzero pixel becomes foreground.
BinaryMask gray_to_mask(const GrayImage& img);

}  // namespace retina
