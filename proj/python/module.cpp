// Python bindings: images cross the boundary as uint8 numpy arrays, HxW for
// gray and masks, HxWx3 for RGB.

#include <cstring>
#include <optional>
#include <sstream>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "retina/dcnn.hpp"
#include "retina/eval.hpp"
#include "retina/filters.hpp"
#include "retina/pipelines.hpp"

namespace py = pybind11;
using namespace retina;

namespace {

using U8Array = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

template <typename Img>
Img from_2d(const U8Array& a) {
    if (a.ndim() != 2) throw std::invalid_argument("expected a 2-D uint8 array");
    const auto h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
    std::vector<std::uint8_t> data(a.data(), a.data() + a.size());
    if constexpr (std::is_same_v<Img, BinaryMask>)
        for (auto& v : data) v = v ? 1 : 0;
    return Img(w, h, std::move(data));
}

RgbImage from_rgb(const U8Array& a) {
    if (a.ndim() != 3 || a.shape(2) != 3) throw std::invalid_argument("expected an HxWx3 uint8 array");
    const auto h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
    std::vector<Rgb> data(static_cast<std::size_t>(w) * h);
    std::memcpy(data.data(), a.data(), data.size() * 3);
    return RgbImage(w, h, std::move(data));
}

template <typename Img>
U8Array to_array(const Img& img) {
    U8Array out({img.height(), img.width()});
    std::memcpy(out.mutable_data(), img.data().data(), img.size());
    return out;
}

// Masks come back as 0/255 so they can be written straight to disk.
U8Array mask_array(const BinaryMask& m) { return to_array(mask_to_gray(m)); }

py::dict metrics_dict(const eval::MetricsReport& r) {
    py::dict d;
    d["accuracy"] = r.accuracy;
    d["specificity"] = r.specificity;
    d["sensitivity"] = r.sensitivity;
    d["dice"] = r.dice;
    return d;
}

}  // namespace

PYBIND11_MODULE(_retina, m) {
    m.doc() = "Retinal fundus analysis: vessels, optic disc, exudates";

    py::class_<Point>(m, "Point")
        .def(py::init<int, int>(), py::arg("x") = 0, py::arg("y") = 0)
        .def_readwrite("x", &Point::x)
        .def_readwrite("y", &Point::y)
        .def("__repr__", [](const Point& p) {
            return "Point(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
        });

    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("asf_schedule", &PipelineConfig::asf_schedule)
        .def_readwrite("clahe_clip", &PipelineConfig::clahe_clip)
        .def_property(
            "clahe_grid", [](const PipelineConfig& c) { return std::pair{c.clahe_grid.tiles_x, c.clahe_grid.tiles_y}; },
            [](PipelineConfig& c, std::pair<int, int> g) { c.clahe_grid = {g.first, g.second}; })
        .def_readwrite("median_k", &PipelineConfig::median_k)
        .def_readwrite("vessel_thresh_offset", &PipelineConfig::vessel_thresh_offset)
        .def_readwrite("vessel_max_blob", &PipelineConfig::vessel_max_blob)
        .def_property(
            "od_working_size",
            [](const PipelineConfig& c) { return std::pair{c.od_working_size.width, c.od_working_size.height}; },
            [](PipelineConfig& c, std::pair<int, int> s) { c.od_working_size = {s.first, s.second}; })
        .def_readwrite("od_kmeans_k", &PipelineConfig::od_kmeans_k)
        .def_readwrite("od_template_side", &PipelineConfig::od_template_side)
        .def_readwrite("od_template_radius", &PipelineConfig::od_template_radius)
        .def_readwrite("od_mask_scale", &PipelineConfig::od_mask_scale)
        .def_readwrite("exu_kmeans_k", &PipelineConfig::exu_kmeans_k)
        .def_readwrite("canny_sigma", &PipelineConfig::canny_sigma)
        .def_readwrite("canny_low", &PipelineConfig::canny_low)
        .def_readwrite("canny_high", &PipelineConfig::canny_high)
        .def_readwrite("exu_large_structure_area", &PipelineConfig::exu_large_structure_area)
        .def_readwrite("exu_bright_fraction", &PipelineConfig::exu_bright_fraction)
        .def_readwrite("kmeans_max_iter", &PipelineConfig::kmeans_max_iter)
        .def_readwrite("kmeans_restarts", &PipelineConfig::kmeans_restarts)
        .def_readwrite("kmeans_exact", &PipelineConfig::kmeans_exact)
        .def_readwrite("random_seed", &PipelineConfig::random_seed)
        .def("validate", &PipelineConfig::validate);

    py::class_<OdLocation>(m, "OdLocation")
        .def_readonly("center", &OdLocation::center)
        .def_readonly("center_full", &OdLocation::center_full)
        .def_readonly("radius", &OdLocation::radius)
        .def_readonly("score", &OdLocation::score)
        .def("__repr__", [](const OdLocation& o) {
            return "OdLocation(x=" + std::to_string(o.center_full.x) + ", y=" + std::to_string(o.center_full.y) +
                   ", radius=" + std::to_string(o.radius) + ")";
        });

    m.def("segment_vessels", [](const U8Array& rgb, const PipelineConfig& cfg) {
        return mask_array(segment_vessels(from_rgb(rgb), cfg));
    }, py::arg("rgb"), py::arg("config") = PipelineConfig{});
    m.def("locate_optic_disc", [](const U8Array& rgb, const PipelineConfig& cfg) {
        return locate_optic_disc(from_rgb(rgb), cfg);
    }, py::arg("rgb"), py::arg("config") = PipelineConfig{});
    m.def("detect_exudates", [](const U8Array& rgb, const PipelineConfig& cfg) {
        return mask_array(detect_exudates(from_rgb(rgb), cfg));
    }, py::arg("rgb"), py::arg("config") = PipelineConfig{});

    m.def("clahe", [](const U8Array& gray, double clip, std::pair<int, int> grid) {
        return to_array(clahe(from_2d<GrayImage>(gray), clip, {grid.first, grid.second}));
    }, py::arg("gray"), py::arg("clip_limit") = 2.0, py::arg("grid") = std::pair{8, 8});
    m.def("median_filter", [](const U8Array& gray, int k) {
        return to_array(median_filter(from_2d<GrayImage>(gray), k));
    }, py::arg("gray"), py::arg("k") = 3);
    m.def("canny", [](const U8Array& gray, double low, double high, double sigma) {
        return mask_array(canny(from_2d<GrayImage>(gray), {low, high, sigma}));
    }, py::arg("gray"), py::arg("low") = 50.0, py::arg("high") = 150.0, py::arg("sigma") = 1.4);

    m.def("confusion", [](const U8Array& pred, const U8Array& gt, std::optional<U8Array> roi) {
        std::optional<BinaryMask> r;
        if (roi) r = from_2d<BinaryMask>(*roi);
        const auto c = eval::confusion(from_2d<BinaryMask>(pred), from_2d<BinaryMask>(gt), r);
        py::dict d;
        d["tp"] = c.tp;
        d["tn"] = c.tn;
        d["fp"] = c.fp;
        d["fn"] = c.fn;
        return d;
    }, py::arg("pred"), py::arg("gt"), py::arg("roi") = py::none());
    m.def("metrics", [](std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) {
        return metrics_dict(eval::metrics({tp, tn, fp, fn}));
    }, py::arg("tp"), py::arg("tn"), py::arg("fp"), py::arg("fn"));

    m.def("output_extent", [](int n, int kernel, int stride, const std::string& padding) {
        if (padding != "same" && padding != "valid") throw std::invalid_argument("padding must be same or valid");
        return dcnn::output_extent(n, kernel, stride, padding == "same" ? dcnn::Padding::same : dcnn::Padding::valid);
    }, py::arg("n"), py::arg("kernel"), py::arg("stride") = 1, py::arg("padding") = "same");
    m.def("trace_shapes", [](const std::string& input, std::optional<std::string> arch) {
        std::vector<dcnn::LayerSpec> layers;
        if (arch) {
            std::istringstream in(*arch);
            layers = dcnn::parse_architecture(in);
        } else {
            layers = dcnn::reference_architecture();
        }
        const auto trace = dcnn::trace_shapes(dcnn::parse_shape(input), layers);
        py::list out;
        for (const auto& l : trace.layers)
            out.append(py::make_tuple(l.output.height, l.output.width, l.output.channels, l.params));
        return out;
    }, py::arg("input") = "300x300x3", py::arg("arch") = py::none(),
       "Output (height, width, channels, params) per layer; `arch` uses the layer-file syntax.");

    py::register_exception<dcnn::InvalidArchitecture>(m, "InvalidArchitecture", PyExc_ValueError);
}
