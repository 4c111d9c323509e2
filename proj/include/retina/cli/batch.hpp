#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "retina/cli/dataset.hpp"
#include "retina/eval.hpp"
#include "retina/pipelines.hpp"

namespace retina::cli {

enum class Command { vessels, optic_disc, exudates, eval };

const char* command_name(Command cmd);

struct ItemRecord {
    std::string id;
    std::filesystem::path image_path;
    bool ok = true;
    std::string error;
    double seconds = 0.0;
    std::filesystem::path mask_path;
    std::filesystem::path overlay_path;
    std::optional<eval::ConfusionCounts> counts;
    std::optional<eval::MetricsReport> metrics;
    std::optional<OdLocation> od;
    std::optional<bool> od_hit;
    std::optional<double> od_tolerance;
};

struct RunManifest {
    Command command = Command::vessels;
    std::string config;
    std::vector<ItemRecord> items;
    eval::MeanReport aggregate;
    int od_evaluated = 0;
    int od_hits = 0;

    int failures() const;
    /// 0 when every item succeeded, 2 when some failed.
    int exit_code() const;
};

struct RunOptions {
    int jobs = 1;
    /// Restrict vessel metrics to the field-of-view mask when one is paired.
    bool use_fov = true;
    /// Write measured seconds into metrics.csv. Off by default so reruns are
    /// byte-identical; manifest.json always carries the timings.
    bool csv_timing = false;
};

/// Runs the pipeline for every item, writing out_dir/masks/<id>.png,
/// out_dir/overlays/<id>.png, out_dir/metrics.csv, out_dir/manifest.json and,
/// for the optic disc, out_dir/od_centers.jsonl. Per-item failures are recorded
/// and the batch continues.
RunManifest run_batch(Command cmd, const std::vector<DatasetItem>& items, const PipelineConfig& cfg,
                      const std::filesystem::path& out_dir, const RunOptions& options = {});

/// Scores every prediction mask in pred_dir against the ground truth with the
/// same pairing key, optionally inside a FOV mask.
RunManifest evaluate_directory(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                               const std::optional<std::filesystem::path>& fov_dir);

/// Header `id,accuracy,specificity,sensitivity,dice,seconds`, one row per
/// item, then a MEAN row over defined values. Four decimals; undefined as NA.
void write_metrics_csv(const RunManifest& manifest, const std::filesystem::path& path, bool with_timing = true);

void write_manifest_json(const RunManifest& manifest, const std::filesystem::path& path);

}  // namespace retina::cli
