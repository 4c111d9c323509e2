#include "retina/cli/image_io.hpp"

#include <cmath>
#include <vector>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace retina::cli {

namespace {

cv::Mat decode(const std::filesystem::path& path, int flags) {
    if (!std::filesystem::is_regular_file(path)) throw IoError("no such image: " + path.string());
    cv::Mat m;
    try {
        m = cv::imread(path.string(), flags);
    } catch (const cv::Exception& e) {
        throw IoError("cannot decode " + path.string() + ": " + e.what());
    }
    if (m.empty()) throw IoError("cannot decode " + path.string());
    if (m.depth() != CV_8U) throw IoError("not an 8-bit image: " + path.string());
    return m;
}

void encode(const std::filesystem::path& path, const cv::Mat& m) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    bool ok = false;
    try {
        ok = cv::imwrite(path.string(), m, {cv::IMWRITE_PNG_COMPRESSION, 6});
    } catch (const cv::Exception& e) {
        throw IoError("cannot write " + path.string() + ": " + e.what());
    }
    if (!ok) throw IoError("cannot write " + path.string());
}

}  // namespace

RgbImage read_rgb(const std::filesystem::path& path) {
    const cv::Mat m = decode(path, cv::IMREAD_COLOR);
    RgbImage out(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const auto* src = m.ptr<cv::Vec3b>(y);
        Rgb* dst = out.row(y);
        for (int x = 0; x < m.cols; ++x) dst[x] = Rgb{src[x][2], src[x][1], src[x][0]};
    }
    return out;
}

GrayImage read_gray(const std::filesystem::path& path) {
    const cv::Mat m = decode(path, cv::IMREAD_GRAYSCALE);
    GrayImage out(m.cols, m.rows);
    for (int y = 0; y < m.rows; ++y) {
        const auto* src = m.ptr<std::uint8_t>(y);
        std::copy(src, src + m.cols, out.row(y));
    }
    return out;
}

BinaryMask read_mask(const std::filesystem::path& path) { return gray_to_mask(read_gray(path)); }

void write_png(const std::filesystem::path& path, const GrayImage& img) {
    cv::Mat m(img.height(), img.width(), CV_8UC1, const_cast<std::uint8_t*>(img.data().data()));
    encode(path, m);
}

void write_png(const std::filesystem::path& path, const RgbImage& img) {
    cv::Mat m(img.height(), img.width(), CV_8UC3);
    for (int y = 0; y < img.height(); ++y) {
        auto* dst = m.ptr<cv::Vec3b>(y);
        const Rgb* src = img.row(y);
        for (int x = 0; x < img.width(); ++x) dst[x] = cv::Vec3b(src[x].b, src[x].g, src[x].r);
    }
    encode(path, m);
}

void write_png(const std::filesystem::path& path, const BinaryMask& mask) { write_png(path, mask_to_gray(mask)); }

RgbImage overlay(const RgbImage& img, const BinaryMask& mask) {
    if (!img.same_shape(mask)) throw std::invalid_argument("overlay: image and mask dimensions differ");
    RgbImage out = img;
    constexpr int kAlpha = 60;  // percent
    auto blend = [](int base, int tint) {
        return static_cast<std::uint8_t>((base * (100 - kAlpha) + tint * kAlpha + 50) / 100);
    };
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!mask.data()[i]) continue;
        Rgb& p = out.data()[i];
        p = Rgb{blend(p.r, 0), blend(p.g, 255), blend(p.b, 0)};
    }
    return out;
}

}  // namespace retina::cli
