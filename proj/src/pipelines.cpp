#include "retina/pipelines.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "retina/contours.hpp"
#include "retina/kmeans.hpp"
#include "retina/template_match.hpp"

namespace retina {

namespace {

constexpr double kIdridArea = 4288.0 * 2848.0;

void fail(const std::string& field, const std::string& why) {
    throw std::invalid_argument("PipelineConfig." + field + ": " + why);
}

bool odd_positive(int v) { return v >= 1 && v % 2 == 1; }

KMeansOptions kmeans_options(const PipelineConfig& cfg) {
    KMeansOptions opt;
    opt.max_iter = cfg.kmeans_max_iter;
    opt.random_restarts = cfg.kmeans_restarts;
    opt.seed = cfg.random_seed;
    opt.exact_candidate = cfg.kmeans_exact;
    return opt;
}

int map_back(int coord, int working, int full) {
    const double v = (coord + 0.5) * static_cast<double>(full) / working - 0.5;
    return std::clamp(static_cast<int>(std::lround(v)), 0, full - 1);
}

}  // namespace

void PipelineConfig::validate() const {
    if (asf_schedule.empty()) fail("asf_schedule", "must not be empty");
    for (const auto& [w, h] : asf_schedule)
        if (!odd_positive(w) || !odd_positive(h)) fail("asf_schedule", "kernel sizes must be odd");
    if (!(clahe_clip > 0.0)) fail("clahe_clip", "must be positive");
    if (clahe_grid.tiles_x < 1 || clahe_grid.tiles_y < 1) fail("clahe_grid", "must be at least 1x1");
    if (!odd_positive(median_k)) fail("median_k", "must be odd");
    if (od_working_size.width < 1 || od_working_size.height < 1) fail("od_working_size", "must be positive");
    if (od_kmeans_k < 1) fail("od_kmeans_k", "must be >= 1");
    if (exu_kmeans_k < 1) fail("exu_kmeans_k", "must be >= 1");
    if (od_template_radius < 0 || od_template_side < 2 * od_template_radius + 1)
        fail("od_template_side", "must be at least 2 * od_template_radius + 1");
    if (od_working_size.width < od_template_side || od_working_size.height < od_template_side)
        fail("od_working_size", "must be at least the template side");
    if (od_mask_scale < 1.0) fail("od_mask_scale", "must be >= 1");
    if (canny_low < 0.0 || canny_low > canny_high) fail("canny_low", "must satisfy 0 <= low <= high");
    if (exu_large_structure_area < 0.0) fail("exu_large_structure_area", "must be non-negative");
    if (exu_bright_fraction < 0.0 || exu_bright_fraction > 1.0) fail("exu_bright_fraction", "must lie in [0, 1]");
    if (kmeans_max_iter < 1) fail("kmeans_max_iter", "must be >= 1");
    if (kmeans_restarts < 0) fail("kmeans_restarts", "must be >= 0");
}

BinaryMask segment_vessels(const RgbImage& img, const PipelineConfig& cfg) {
    cfg.validate();
    const GrayImage enhanced = clahe(green_channel(img), cfg.clahe_clip, cfg.clahe_grid);
    const GrayImage background = asf(enhanced, cfg.asf_schedule, cfg.asf_order);
    const GrayImage outline = cfg.vessel_subtract == SubtractOrder::background_minus_image
                                  ? subtract_saturating(background, enhanced)
                                  : subtract_saturating(enhanced, background);
    const GrayImage contrasted = clahe(outline, cfg.clahe_clip, cfg.clahe_grid);
    const GrayImage smoothed = median_filter(contrasted, cfg.median_k);
    const BinaryMask raw = threshold_mean(smoothed, cfg.vessel_thresh_offset);
    return filter_blobs(raw, cfg.vessel_max_blob + 1);
}

OdLocation locate_optic_disc(const RgbImage& img, const PipelineConfig& cfg) {
    cfg.validate();
    const int ww = cfg.od_working_size.width;
    const int wh = cfg.od_working_size.height;
    const GrayImage gray = to_gray(resize_bilinear(img, ww, wh));
    const KMeansResult km = kmeans_intensity(gray, cfg.od_kmeans_k, kmeans_options(cfg));
    const GrayImage quantized = quantize(km);
    const GrayImage tmpl = generate_disc_template(cfg.od_template_side, cfg.od_template_radius);
    const Match m = best_match(match_template_nccoeff(quantized, tmpl));

    OdLocation od;
    od.center = {m.x + cfg.od_template_side / 2, m.y + cfg.od_template_side / 2};
    od.center_full = {map_back(od.center.x, ww, img.width()), map_back(od.center.y, wh, img.height())};
    const double sx = static_cast<double>(img.width()) / ww;
    const double sy = static_cast<double>(img.height()) / wh;
    od.radius = cfg.od_template_radius * 0.5 * (sx + sy);
    od.score = m.score;
    return od;
}

BinaryMask mask_optic_disc(const BinaryMask& base, const OdLocation& od, double scale) {
    if (scale < 1.0) throw std::invalid_argument("mask_optic_disc: scale must be >= 1");
    return apply_circular_mask(base, od.center_full, od.radius * scale, false);
}

GrayImage mask_optic_disc(const GrayImage& base, const OdLocation& od, double scale) {
    if (scale < 1.0) throw std::invalid_argument("mask_optic_disc: scale must be >= 1");
    return apply_circular_mask(base, od.center_full, od.radius * scale, std::uint8_t{0});
}

double scaled_structure_area(const PipelineConfig& cfg, int width, int height) {
    return cfg.exu_large_structure_area * (static_cast<double>(width) * height) / kIdridArea;
}

ExudateStages detect_exudates_stages(const RgbImage& img, const PipelineConfig& cfg) {
    cfg.validate();
    ExudateStages st;

    const KMeansResult km = cfg.exu_kmeans_space == ColorSpace::rgb
                                ? kmeans_color(img, cfg.exu_kmeans_k, kmeans_options(cfg)).summary
                                : kmeans_intensity(to_gray(img), cfg.exu_kmeans_k, kmeans_options(cfg));
    // A single cluster carries no notion of "brightest".
    st.large = km.k >= 2 ? brightest_cluster_mask(km) : BinaryMask(img.width(), img.height());

    const GrayImage green = green_channel(img);
    const BinaryMask edges = canny(green, {cfg.canny_low, cfg.canny_high, cfg.canny_sigma});
    const auto contours = find_contours(edges);
    // find_contours and label_components both number components in raster order.
    const auto comps = label_components(edges);
    const double limit = scaled_structure_area(cfg, img.width(), img.height());
    std::vector<Contour> small_structures;
    for (std::size_t i = 0; i < contours.size(); ++i)
        if (static_cast<double>(comps.sizes[i]) <= limit) small_structures.push_back(contours[i]);
    const BinaryMask regions = fill_contours(small_structures, img.width(), img.height());
    const auto peak = *std::max_element(green.data().begin(), green.data().end());
    const BinaryMask bright = threshold_above(green, cfg.exu_bright_fraction * peak);
    st.small = logical_and(regions, bright);

    st.combined = logical_or(st.large, st.small);
    st.od = locate_optic_disc(img, cfg);
    st.result = mask_optic_disc(st.combined, st.od, cfg.od_mask_scale);
    return st;
}

BinaryMask detect_exudates(const RgbImage& img, const PipelineConfig& cfg) {
    return detect_exudates_stages(img, cfg).result;
}

}  // namespace retina
