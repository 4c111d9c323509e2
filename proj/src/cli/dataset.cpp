#include "retina/cli/dataset.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "retina/cli/image_io.hpp"

namespace fs = std::filesystem;

namespace retina::cli {

namespace {

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::vector<fs::path> images_in(const fs::path& dir) {
    std::vector<fs::path> out;
    if (!fs::is_directory(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && is_image_file(e.path())) out.push_back(e.path());
    std::sort(out.begin(), out.end(), [](const fs::path& a, const fs::path& b) {
        return a.filename().string() < b.filename().string();
    });
    return out;
}

// Annotation files keyed by pairing key; duplicates keep the first name.
std::map<std::string, fs::path> keyed(const fs::path& dir) {
    std::map<std::string, fs::path> out;
    for (const auto& p : images_in(dir)) out.emplace(pairing_key(p), p);
    return out;
}

fs::path first_existing(const fs::path& root, std::initializer_list<const char*> names) {
    for (const char* n : names)
        if (fs::is_directory(root / n)) return root / n;
    return root / *names.begin();
}

std::map<std::string, Point> read_od_centers(const fs::path& csv, std::vector<std::string>& warnings) {
    std::map<std::string, Point> out;
    std::ifstream in(csv);
    if (!in) return out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::stringstream ss(line);
        std::string id, xs, ys;
        if (!std::getline(ss, id, ',') || !std::getline(ss, xs, ',') || !std::getline(ss, ys, ',')) continue;
        try {
            out[pairing_key(fs::path(id))] = {std::stoi(xs), std::stoi(ys)};
        } catch (const std::exception&) {
            if (lineno > 1) warnings.push_back(csv.string() + ":" + std::to_string(lineno) + ": unparsable OD centre row");
        }
    }
    return out;
}

}  // namespace

Layout parse_layout(const std::string& name) {
    if (name == "drive") return Layout::drive;
    if (name == "idrid-seg") return Layout::idrid_seg;
    if (name == "flat") return Layout::flat;
    throw std::invalid_argument("unknown layout '" + name + "' (drive, idrid-seg, flat)");
}

bool is_image_file(const fs::path& file) {
    static const std::array<const char*, 10> exts{".png", ".tif", ".tiff", ".jpg", ".jpeg",
                                                  ".ppm", ".pgm", ".pnm", ".bmp", ".gif"};
    const auto e = lower(file.extension().string());
    return std::find(exts.begin(), exts.end(), e) != exts.end();
}

std::string pairing_key(const fs::path& file) {
    static const std::array<const char*, 9> suffixes{"_mask", "_manual1", "_manual2", "_test", "_training",
                                                     "_od",   "_ex",      "_gt",      "_pred"};
    std::string stem = file.stem().string();
    for (bool changed = true; changed;) {
        changed = false;
        const std::string low = lower(stem);
        for (const char* s : suffixes) {
            const std::string suf(s);
            if (low.size() > suf.size() && low.compare(low.size() - suf.size(), suf.size(), suf) == 0) {
                stem.erase(stem.size() - suf.size());
                changed = true;
                break;
            }
        }
    }
    std::size_t digits = 0;
    while (digits < stem.size() && std::isdigit(static_cast<unsigned char>(stem[digits]))) ++digits;
    return digits > 0 ? stem.substr(0, digits) : stem;
}

LoadResult load_dataset(const fs::path& root, Layout layout) {
    if (!fs::exists(root)) throw IoError("dataset root does not exist: " + root.string());
    LoadResult out;
    if (fs::is_regular_file(root)) {
        out.items.push_back({root.stem().string(), root, {}, {}, {}, {}, {}});
        return out;
    }

    if (layout == Layout::flat) {
        for (const auto& p : images_in(root)) out.items.push_back({p.stem().string(), p, {}, {}, {}, {}, {}});
        return out;
    }

    const fs::path image_dir = root / "images";
    if (!fs::is_directory(image_dir)) {
        out.warnings.push_back("no images/ directory under " + root.string());
        return out;
    }

    if (layout == Layout::drive) {
        const auto manual = keyed(root / "1st_manual");
        const auto fov = keyed(root / "mask");
        for (const auto& p : images_in(image_dir)) {
            DatasetItem item{p.stem().string(), p, {}, {}, {}, {}, {}};
            const auto key = pairing_key(p);
            if (auto it = manual.find(key); it != manual.end()) item.gt_vessel_path = it->second;
            else out.warnings.push_back(item.id + ": no vessel ground truth");
            if (auto it = fov.find(key); it != fov.end()) item.fov_path = it->second;
            out.items.push_back(std::move(item));
        }
        return out;
    }

    const auto od = keyed(first_existing(root, {"optic_disc", "od"}));
    const auto ex = keyed(first_existing(root, {"hard_exudates", "exudates"}));
    const auto centres = read_od_centers(root / "od_centers.csv", out.warnings);
    for (const auto& p : images_in(image_dir)) {
        DatasetItem item{p.stem().string(), p, {}, {}, {}, {}, {}};
        const auto key = pairing_key(p);
        if (auto it = od.find(key); it != od.end()) item.gt_od_mask_path = it->second;
        if (auto it = ex.find(key); it != ex.end()) item.gt_exudate_mask_path = it->second;
        if (auto it = centres.find(key); it != centres.end()) item.gt_od_center = it->second;
        if (!item.gt_od_mask_path && !item.gt_od_center && !item.gt_exudate_mask_path)
            out.warnings.push_back(item.id + ": no optic disc or exudate ground truth");
        out.items.push_back(std::move(item));
    }
    return out;
}

}  // namespace retina::cli
