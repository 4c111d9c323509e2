#pragma once

#include <cstdint>
#include <vector>

#include "retina/filters.hpp"
#include "retina/image.hpp"
#include "retina/morphology.hpp"

namespace retina {

enum class SubtractOrder {
    /// ASF background minus the CLAHE image: vessels come out bright.
    background_minus_image,
    /// CLAHE image minus the ASF background.
    image_minus_background,
};

enum class ColorSpace { gray, rgb };

struct Size2 {
    int width = 0;
    int height = 0;
    friend bool operator==(const Size2&, const Size2&) = default;
};

struct PipelineConfig {
    // Vessels
    std::vector<KernelSize> asf_schedule = default_asf_schedule();
    AsfOrder asf_order = AsfOrder::close_open;
    double clahe_clip = 2.0;
    TileGrid clahe_grid{8, 8};
    SubtractOrder vessel_subtract = SubtractOrder::background_minus_image;
    int median_k = 3;
    /// Added to the image mean before thresholding the contrasted vessel map.
    double vessel_thresh_offset = 25.0;
    /// Isolated components up to this many pixels are dropped from the vessel mask.
    std::size_t vessel_max_blob = 1500;

    // Optic disc
    Size2 od_working_size{300, 300};
    int od_kmeans_k = 5;
    int od_template_side = 51;
    int od_template_radius = 22;
    double od_mask_scale = 1.5;

    // Exudates
    int exu_kmeans_k = 5;
    ColorSpace exu_kmeans_space = ColorSpace::gray;
    double canny_sigma = 1.4;
    double canny_low = 50.0;
    double canny_high = 150.0;
    /// Edge components above this pixel count are large structures; quoted
    /// at 4288x2848 and scaled by image area.
    double exu_large_structure_area = 3000.0;
    /// Small exudates must exceed this fraction of the green-channel maximum.
    double exu_bright_fraction = 0.92;

    int kmeans_max_iter = 100;
    int kmeans_restarts = 0;
    /// Also try the exact 1-D optimum for scalar k-means (see kmeans_intensity).
    bool kmeans_exact = true;
    std::uint64_t random_seed = 0;

    /// Throws std::invalid_argument naming the first bad field.
    void validate() const;
};

struct OdLocation {
    /// Disc centre at the working resolution.
    Point center;
    /// Disc centre mapped back to the input resolution.
    Point center_full;
    /// Template radius rescaled to the input resolution.
    double radius = 0.0;
    double score = 0.0;
};

BinaryMask segment_vessels(const RgbImage& img, const PipelineConfig& cfg = {});

OdLocation locate_optic_disc(const RgbImage& img, const PipelineConfig& cfg = {});

/// Clears a disc of radius od.radius * scale around od.center_full.
BinaryMask mask_optic_disc(const BinaryMask& base, const OdLocation& od, double scale);
GrayImage mask_optic_disc(const GrayImage& base, const OdLocation& od, double scale);

struct ExudateStages {
    BinaryMask large;     // brightest k-means cluster
    BinaryMask small;     // small closed edge structures within the bright band
    BinaryMask combined;  // large OR small
    OdLocation od;
    BinaryMask result;    // combined with the disc cleared
};

ExudateStages detect_exudates_stages(const RgbImage& img, const PipelineConfig& cfg = {});
BinaryMask detect_exudates(const RgbImage& img, const PipelineConfig& cfg = {});

/// Pixel-count threshold for large edge structures at the given image size.
double scaled_structure_area(const PipelineConfig& cfg, int width, int height);

}  // namespace retina
