#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "retina/image.hpp"

namespace retina::cli {

enum class Layout { drive, idrid_seg, flat };

Layout parse_layout(const std::string& name);

struct DatasetItem {
    std::string id;
    std::filesystem::path image_path;
    std::optional<std::filesystem::path> gt_vessel_path;
    std::optional<std::filesystem::path> fov_path;
    std::optional<Point> gt_od_center;
    std::optional<std::filesystem::path> gt_od_mask_path;
    std::optional<std::filesystem::path> gt_exudate_mask_path;
};

struct LoadResult {
    std::vector<DatasetItem> items;
    /// Unpaired ground truth and similar non-fatal findings.
    std::vector<std::string> warnings;
};

/// Pairing key for a file name: the stem with known annotation suffixes
/// (_test, _training, _manual1, _mask, _OD, _EX, ...) stripped, reduced to its
/// leading digits when it starts with one. "01_test.tif", "01_manual1.gif" and
/// "01_test_mask.png" all map to "01".
std::string pairing_key(const std::filesystem::path& file);

bool is_image_file(const std::filesystem::path& file);

/// Layouts, items sorted lexicographically by file name:
///   drive      root/images, root/1st_manual, root/mask
///   idrid-seg  root/images, root/optic_disc, root/hard_exudates and an
///              optional root/od_centers.csv with rows "id,x,y"
///   flat       every image directly under root
/// A file path as root yields a single flat item. A missing root throws IoError.
LoadResult load_dataset(const std::filesystem::path& root, Layout layout);

}  // namespace retina::cli
