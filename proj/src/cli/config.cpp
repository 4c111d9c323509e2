#include "retina/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "retina/cli/image_io.hpp"

namespace retina::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& expected) {
    throw std::invalid_argument("config key '" + key + "': cannot parse '" + value + "' as " + expected);
}

template <typename T>
T number(const std::string& key, const std::string& value) {
    T out{};
    const char* first = value.data();
    const char* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last) bad(key, value, "a number");
    return out;
}

std::pair<int, int> pair_of(const std::string& key, const std::string& value) {
    const auto x = value.find('x');
    if (x == std::string::npos) bad(key, value, "WxH");
    return {number<int>(key, trim(value.substr(0, x))), number<int>(key, trim(value.substr(x + 1)))};
}

std::string pair_text(int a, int b) { return std::to_string(a) + "x" + std::to_string(b); }

// Shortest text that parses back to the same double.
std::string real_text(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

struct Field {
    std::function<void(PipelineConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const PipelineConfig&)> get;
};

const std::vector<std::pair<std::string, Field>>& fields() {
    using C = PipelineConfig;
    static const std::vector<std::pair<std::string, Field>> table = {
        {"asf_schedule",
         {[](C& c, const std::string& k, const std::string& v) {
              std::vector<KernelSize> schedule;
              std::stringstream ss(v);
              for (std::string item; std::getline(ss, item, ',');) schedule.push_back(pair_of(k, trim(item)));
              c.asf_schedule = std::move(schedule);
          },
          [](const C& c) {
              std::string out;
              for (const auto& [w, h] : c.asf_schedule) out += (out.empty() ? "" : ",") + pair_text(w, h);
              return out;
          }}},
        {"asf_order",
         {[](C& c, const std::string& k, const std::string& v) {
              if (v == "close-open") c.asf_order = AsfOrder::close_open;
              else if (v == "open-close") c.asf_order = AsfOrder::open_close;
              else bad(k, v, "close-open|open-close");
          },
          [](const C& c) { return std::string(c.asf_order == AsfOrder::close_open ? "close-open" : "open-close"); }}},
        {"clahe_clip",
         {[](C& c, const std::string& k, const std::string& v) { c.clahe_clip = number<double>(k, v); },
          [](const C& c) { return real_text(c.clahe_clip); }}},
        {"clahe_grid",
         {[](C& c, const std::string& k, const std::string& v) {
              const auto [x, y] = pair_of(k, v);
              c.clahe_grid = {x, y};
          },
          [](const C& c) { return pair_text(c.clahe_grid.tiles_x, c.clahe_grid.tiles_y); }}},
        {"vessel_subtract",
         {[](C& c, const std::string& k, const std::string& v) {
              if (v == "background-minus-image") c.vessel_subtract = SubtractOrder::background_minus_image;
              else if (v == "image-minus-background") c.vessel_subtract = SubtractOrder::image_minus_background;
              else bad(k, v, "background-minus-image|image-minus-background");
          },
          [](const C& c) {
              return std::string(c.vessel_subtract == SubtractOrder::background_minus_image ? "background-minus-image"
                                                                                             : "image-minus-background");
          }}},
        {"median_k",
         {[](C& c, const std::string& k, const std::string& v) { c.median_k = number<int>(k, v); },
          [](const C& c) { return std::to_string(c.median_k); }}},
        {"vessel_thresh_offset",
         {[](C& c, const std::string& k, const std::string& v) { c.vessel_thresh_offset = number<double>(k, v); },
          [](const C& c) { return real_text(c.vessel_thresh_offset); }}},
        {"vessel_max_blob",
         {[](C& c, const std::string& k, const std::string& v) { c.vessel_max_blob = number<std::size_t>(k, v); },
          [](const C& c) { return std::to_string(c.vessel_max_blob); }}},
        {"od_working_size",
         {[](C& c, const std::string& k, const std::string& v) {
              const auto [w, h] = pair_of(k, v);
              c.od_working_size = {w, h};
          },
          [](const C& c) { return pair_text(c.od_working_size.width, c.od_working_size.height); }}},
        {"od_kmeans_k",
         {[](C& c, const std::string& k, const std::string& v) { c.od_kmeans_k = number<int>(k, v); },
          [](const C& c) { return std::to_string(c.od_kmeans_k); }}},
        {"od_template_side",
         {[](C& c, const std::string& k, const std::string& v) { c.od_template_side = number<int>(k, v); },
          [](const C& c) { return std::to_string(c.od_template_side); }}},
        {"od_template_radius",
         {[](C& c, const std::string& k, const std::string& v) { c.od_template_radius = number<int>(k, v); },
          [](const C& c) { return std::to_string(c.od_template_radius); }}},
        {"od_mask_scale",
         {[](C& c, const std::string& k, const std::string& v) { c.od_mask_scale = number<double>(k, v); },
          [](const C& c) { return real_text(c.od_mask_scale); }}},
        {"exu_kmeans_k",
         {[](C& c, const std::string& k, const std::string& v) { c.exu_kmeans_k = number<int>(k, v); },
          [](const C& c) { return std::to_string(c.exu_kmeans_k); }}},
        {"exu_kmeans_space",
         {[](C& c, const std::string& k, const std::string& v) {
              if (v == "gray") c.exu_kmeans_space = ColorSpace::gray;
              else if (v == "rgb") c.exu_kmeans_space = ColorSpace::rgb;
              else bad(k, v, "gray|rgb");
          },
          [](const C& c) { return std::string(c.exu_kmeans_space == ColorSpace::gray ? "gray" : "rgb"); }}},
        {"canny_sigma",
         {[](C& c, const std::string& k, const std::string& v) { c.canny_sigma = number<double>(k, v); },
          [](const C& c) { return real_text(c.canny_sigma); }}},
        {"canny_low",
         {[](C& c, const std::string& k, const std::string& v) { c.canny_low = number<double>(k, v); },
          [](const C& c) { return real_text(c.canny_low); }}},
        {"canny_high",
         {[](C& c, const std::string& k, const std::string& v) { c.canny_high = number<double>(k, v); },
          [](const C& c) { return real_text(c.canny_high); }}},
        {"exu_large_structure_area",
         {[](C& c, const std::string& k, const std::string& v) { c.exu_large_structure_area = number<double>(k, v); },
          [](const C& c) { return real_text(c.exu_large_structure_area); }}},
        {"exu_bright_fraction",
         {[](C& c, const std::string& k, const std::string& v) { c.exu_bright_fraction = number<double>(k, v); },
          [](const C& c) { return real_text(c.exu_bright_fraction); }}},
        {"kmeans_max_iter",
         {[](C& c, const std::string& k, const std::string& v) { c.kmeans_max_iter = number<int>(k, v); },
          [](const C& c) { return std::to_string(c.kmeans_max_iter); }}},
        {"kmeans_restarts",
         {[](C& c, const std::string& k, const std::string& v) { c.kmeans_restarts = number<int>(k, v); },
          [](const C& c) { return std::to_string(c.kmeans_restarts); }}},
        {"kmeans_exact",
         {[](C& c, const std::string& k, const std::string& v) {
              if (v == "true" || v == "1") c.kmeans_exact = true;
              else if (v == "false" || v == "0") c.kmeans_exact = false;
              else throw std::invalid_argument(k + ": expected true or false, got '" + v + "'");
          },
          [](const C& c) { return std::string(c.kmeans_exact ? "true" : "false"); }}},
        {"random_seed",
         {[](C& c, const std::string& k, const std::string& v) { c.random_seed = number<std::uint64_t>(k, v); },
          [](const C& c) { return std::to_string(c.random_seed); }}},
    };
    return table;
}

}  // namespace

void apply_setting(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& [name, field] : fields()) {
        if (name == key) {
            field.set(cfg, key, trim(value));
            return;
        }
    }
    throw std::invalid_argument("unknown config key '" + key + "'");
}

PipelineConfig parse_config(std::istream& in, PipelineConfig base) {
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    base.validate();
    return base;
}

PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path.string());
    return parse_config(in, std::move(base));
}

void apply_overrides(PipelineConfig& cfg, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("override '" + o + "' must be key=value");
        apply_setting(cfg, trim(o.substr(0, eq)), trim(o.substr(eq + 1)));
    }
    cfg.validate();
}

std::string format_config(const PipelineConfig& cfg) {
    std::string out;
    for (const auto& [name, field] : fields()) out += name + " = " + field.get(cfg) + "\n";
    return out;
}

}  // namespace retina::cli
