#include "retina/cli/batch.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <thread>

#include <json.hpp>

#include "retina/cli/config.hpp"
#include "retina/cli/image_io.hpp"

namespace fs = std::filesystem;

namespace retina::cli {

namespace {

std::string fixed4(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string cell(const std::optional<double>& v) { return v ? fixed4(*v) : "NA"; }

void score_od(ItemRecord& rec, const DatasetItem& item, int width, int height) {
    std::optional<Point> centre = item.gt_od_center;
    double tol = eval::default_hit_tolerance(width, height);
    if (item.gt_od_mask_path) {
        if (const auto ref = eval::disc_from_mask(read_mask(*item.gt_od_mask_path))) {
            tol = ref->radius;
            if (!centre) centre = ref->center;
        }
    }
    if (!centre) return;
    rec.od_tolerance = tol;
    rec.od_hit = eval::od_hit(*rec.od, *centre, tol);
}

void score_mask(ItemRecord& rec, const BinaryMask& pred, const fs::path& gt_path,
                const std::optional<fs::path>& roi_path) {
    const BinaryMask gt = read_mask(gt_path);
    std::optional<BinaryMask> roi;
    if (roi_path) roi = read_mask(*roi_path);
    rec.counts = eval::confusion(pred, gt, roi);
    rec.metrics = eval::metrics(*rec.counts);
}

ItemRecord process(Command cmd, const DatasetItem& item, const PipelineConfig& cfg, const fs::path& out_dir,
                   const RunOptions& options) {
    ItemRecord rec;
    rec.id = item.id;
    rec.image_path = item.image_path;
    const auto start = std::chrono::steady_clock::now();
    try {
        const RgbImage img = read_rgb(item.image_path);
        BinaryMask mask;
        RgbImage shown;
        switch (cmd) {
            case Command::vessels:
                mask = segment_vessels(img, cfg);
                shown = overlay(img, mask);
                break;
            case Command::exudates:
                mask = detect_exudates(img, cfg);
                shown = overlay(img, mask);
                break;
            case Command::optic_disc: {
                rec.od = locate_optic_disc(img, cfg);
                mask = apply_circular_mask(BinaryMask(img.width(), img.height()), rec.od->center_full,
                                           rec.od->radius, true);
                // Disc region blacked out at the masking scale, as fed to exudate detection.
                const BinaryMask cleared = apply_circular_mask(BinaryMask(img.width(), img.height()),
                                                               rec.od->center_full,
                                                               rec.od->radius * cfg.od_mask_scale, true);
                shown = img;
                for (std::size_t i = 0; i < shown.size(); ++i)
                    if (cleared.data()[i]) shown.data()[i] = Rgb{0, 0, 0};
                break;
            }
            case Command::eval: throw std::invalid_argument("eval is not a pipeline command");
        }
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        rec.mask_path = out_dir / "masks" / (item.id + ".png");
        rec.overlay_path = out_dir / "overlays" / (item.id + ".png");
        write_png(rec.mask_path, mask);
        write_png(rec.overlay_path, shown);

        if (cmd == Command::vessels && item.gt_vessel_path)
            score_mask(rec, mask, *item.gt_vessel_path, options.use_fov ? item.fov_path : std::nullopt);
        if (cmd == Command::exudates && item.gt_exudate_mask_path)
            score_mask(rec, mask, *item.gt_exudate_mask_path, std::nullopt);
        if (cmd == Command::optic_disc) score_od(rec, item, img.width(), img.height());
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return rec;
}

void finalize(RunManifest& m) {
    std::vector<eval::MetricsReport> reports;
    m.od_evaluated = 0;
    m.od_hits = 0;
    for (const auto& r : m.items) {
        if (r.metrics) reports.push_back(*r.metrics);
        if (r.od_hit) {
            ++m.od_evaluated;
            if (*r.od_hit) ++m.od_hits;
        }
    }
    m.aggregate = eval::mean_of(reports);
}

nlohmann::ordered_json metrics_json(const eval::MetricsReport& r) {
    auto v = [](const std::optional<double>& x) { return x ? nlohmann::ordered_json(*x) : nlohmann::ordered_json(nullptr); };
    return {{"accuracy", v(r.accuracy)}, {"specificity", v(r.specificity)}, {"sensitivity", v(r.sensitivity)},
            {"dice", v(r.dice)}};
}

}  // namespace

const char* command_name(Command cmd) {
    switch (cmd) {
        case Command::vessels: return "vessels";
        case Command::optic_disc: return "optic-disc";
        case Command::exudates: return "exudates";
        case Command::eval: return "eval";
    }
    return "?";
}

int RunManifest::failures() const {
    return static_cast<int>(std::count_if(items.begin(), items.end(), [](const ItemRecord& r) { return !r.ok; }));
}

int RunManifest::exit_code() const { return failures() > 0 ? 2 : 0; }

RunManifest run_batch(Command cmd, const std::vector<DatasetItem>& items, const PipelineConfig& cfg,
                      const fs::path& out_dir, const RunOptions& options) {
    cfg.validate();
    fs::create_directories(out_dir);
    RunManifest manifest;
    manifest.command = cmd;
    manifest.config = format_config(cfg);
    manifest.items.resize(items.size());

    // Workers own disjoint item slots; the manifest is assembled afterwards.
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++)
            manifest.items[i] = process(cmd, items[i], cfg, out_dir, options);
    };
    const int jobs = std::clamp(options.jobs, 1, std::max(1, static_cast<int>(items.size())));
    std::vector<std::thread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    finalize(manifest);
    write_metrics_csv(manifest, out_dir / "metrics.csv", options.csv_timing);
    write_manifest_json(manifest, out_dir / "manifest.json");
    if (cmd == Command::optic_disc) {
        std::ofstream jl(out_dir / "od_centers.jsonl", std::ios::binary);
        if (!jl) throw IoError("cannot write " + (out_dir / "od_centers.jsonl").string());
        for (const auto& r : manifest.items) {
            if (!r.od) continue;
            nlohmann::ordered_json j{{"id", r.id}, {"x", r.od->center_full.x}, {"y", r.od->center_full.y},
                                     {"score", r.od->score}};
            jl << j.dump() << '\n';
        }
    }
    return manifest;
}

RunManifest evaluate_directory(const fs::path& pred_dir, const fs::path& gt_dir,
                               const std::optional<fs::path>& fov_dir) {
    for (const fs::path& d : {pred_dir, gt_dir})
        if (!fs::is_directory(d)) throw IoError("not a directory: " + d.string());
    if (fov_dir && !fs::is_directory(*fov_dir)) throw IoError("not a directory: " + fov_dir->string());

    auto index = [](const fs::path& dir) {
        std::map<std::string, fs::path> out;
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_regular_file() && is_image_file(e.path())) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto& f : files) out.emplace(pairing_key(f), f);
        return out;
    };
    const auto gts = index(gt_dir);
    std::map<std::string, fs::path> fovs;
    if (fov_dir) fovs = index(*fov_dir);

    std::vector<fs::path> preds;
    for (const auto& e : fs::directory_iterator(pred_dir))
        if (e.is_regular_file() && is_image_file(e.path())) preds.push_back(e.path());
    std::sort(preds.begin(), preds.end());

    RunManifest m;
    m.command = Command::eval;
    for (const auto& p : preds) {
        ItemRecord rec;
        rec.id = p.stem().string();
        rec.mask_path = p;
        const auto start = std::chrono::steady_clock::now();
        const auto key = pairing_key(p);
        try {
            const auto gt = gts.find(key);
            if (gt == gts.end()) throw IoError("no ground truth for " + p.filename().string());
            std::optional<fs::path> roi;
            if (fov_dir) {
                const auto f = fovs.find(key);
                if (f == fovs.end()) throw IoError("no FOV mask for " + p.filename().string());
                roi = f->second;
            }
            score_mask(rec, read_mask(p), gt->second, roi);
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.error = e.what();
        }
        rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        m.items.push_back(std::move(rec));
    }
    finalize(m);
    return m;
}

void write_metrics_csv(const RunManifest& manifest, const fs::path& path, bool with_timing) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "id,accuracy,specificity,sensitivity,dice,seconds\n";
    double seconds = 0.0;
    int rows = 0;
    for (const auto& r : manifest.items) {
        if (!r.ok) continue;
        const eval::MetricsReport m = r.metrics.value_or(eval::MetricsReport{});
        const double s = with_timing ? r.seconds : 0.0;
        out << r.id << ',' << cell(m.accuracy) << ',' << cell(m.specificity) << ',' << cell(m.sensitivity) << ','
            << cell(m.dice) << ',' << fixed4(s) << '\n';
        seconds += s;
        ++rows;
    }
    const auto& a = manifest.aggregate.mean;
    out << "MEAN," << cell(a.accuracy) << ',' << cell(a.specificity) << ',' << cell(a.sensitivity) << ','
        << cell(a.dice) << ',' << (rows ? fixed4(seconds / rows) : "NA") << '\n';
    if (!out) throw IoError("failed writing " + path.string());
}

void write_manifest_json(const RunManifest& manifest, const fs::path& path) {
    nlohmann::ordered_json j;
    j["command"] = command_name(manifest.command);
    j["config"] = manifest.config;
    j["items"] = nlohmann::ordered_json::array();
    for (const auto& r : manifest.items) {
        nlohmann::ordered_json it{{"id", r.id}, {"image", r.image_path.string()}, {"ok", r.ok}, {"seconds", r.seconds}};
        if (!r.ok) it["error"] = r.error;
        if (!r.mask_path.empty()) it["mask"] = r.mask_path.string();
        if (!r.overlay_path.empty()) it["overlay"] = r.overlay_path.string();
        if (r.counts) it["counts"] = {{"tp", r.counts->tp}, {"tn", r.counts->tn}, {"fp", r.counts->fp}, {"fn", r.counts->fn}};
        if (r.metrics) it["metrics"] = metrics_json(*r.metrics);
        if (r.od)
            it["optic_disc"] = {{"x", r.od->center_full.x}, {"y", r.od->center_full.y}, {"radius", r.od->radius},
                                {"score", r.od->score}, {"working_x", r.od->center.x}, {"working_y", r.od->center.y}};
        if (r.od_hit) it["od_hit"] = *r.od_hit;
        if (r.od_tolerance) it["od_tolerance"] = *r.od_tolerance;
        j["items"].push_back(std::move(it));
    }
    nlohmann::ordered_json agg = metrics_json(manifest.aggregate.mean);
    agg["defined_counts"] = {{"accuracy", manifest.aggregate.accuracy_n}, {"specificity", manifest.aggregate.specificity_n},
                             {"sensitivity", manifest.aggregate.sensitivity_n}, {"dice", manifest.aggregate.dice_n}};
    j["aggregate"] = agg;
    if (manifest.command == Command::optic_disc) j["optic_disc"] = {{"evaluated", manifest.od_evaluated}, {"hits", manifest.od_hits}};
    j["failures"] = manifest.failures();
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

}  // namespace retina::cli
