#pragma once

#include <filesystem>
#include <stdexcept>

#include "retina/image.hpp"

namespace retina::cli {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Decodes 8-bit PNG, TIFF, JPEG, PPM/PGM or BMP as RGB.
RgbImage read_rgb(const std::filesystem::path& path);
GrayImage read_gray(const std::filesystem::path& path);
/// Any nonzero pixel is foreground.
BinaryMask read_mask(const std::filesystem::path& path);

void write_png(const std::filesystem::path& path, const GrayImage& img);
void write_png(const std::filesystem::path& path, const RgbImage& img);
/// Stored as 0/255.
void write_png(const std::filesystem::path& path, const BinaryMask& mask);

/// Foreground pixels blended toward pure green at 60% opacity.
RgbImage overlay(const RgbImage& img, const BinaryMask& mask);

}  // namespace retina::cli
