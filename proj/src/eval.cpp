#include "retina/eval.hpp"

#include <cmath>
#include <stdexcept>

namespace retina::eval {

ConfusionCounts& ConfusionCounts::operator+=(const ConfusionCounts& o) noexcept {
    tp += o.tp;
    tn += o.tn;
    fp += o.fp;
    fn += o.fn;
    return *this;
}

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt, const std::optional<BinaryMask>& roi) {
    if (!pred.same_shape(gt) || (roi && !roi->same_shape(pred)))
        throw std::invalid_argument("confusion: prediction, ground truth and roi must share dimensions");
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (roi && !roi->data()[i]) continue;
        const bool p = pred.data()[i] != 0;
        const bool g = gt.data()[i] != 0;
        if (p && g) ++c.tp;
        else if (!p && !g) ++c.tn;
        else if (p) ++c.fp;
        else ++c.fn;
    }
    return c;
}

MetricsReport metrics(const ConfusionCounts& c) {
    auto ratio = [](std::uint64_t num, std::uint64_t den, double scale) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return scale * static_cast<double>(num) / static_cast<double>(den);
    };
    MetricsReport r;
    r.accuracy = ratio(c.tp + c.tn, c.total(), 100.0);
    r.specificity = ratio(c.tn, c.tn + c.fp, 100.0);
    r.sensitivity = ratio(c.tp, c.tp + c.fn, 100.0);
    r.dice = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn, 1.0);
    return r;
}

MeanReport mean_of(const std::vector<MetricsReport>& reports) {
    MeanReport out;
    auto average = [&](std::optional<double> MetricsReport::*field, int& n) -> std::optional<double> {
        double sum = 0.0;
        n = 0;
        for (const auto& r : reports) {
            if (const auto& v = r.*field) {
                sum += *v;
                ++n;
            }
        }
        if (n == 0) return std::nullopt;
        return sum / n;
    };
    out.mean.accuracy = average(&MetricsReport::accuracy, out.accuracy_n);
    out.mean.specificity = average(&MetricsReport::specificity, out.specificity_n);
    out.mean.sensitivity = average(&MetricsReport::sensitivity, out.sensitivity_n);
    out.mean.dice = average(&MetricsReport::dice, out.dice_n);
    return out;
}

std::optional<DiscReference> disc_from_mask(const BinaryMask& mask) {
    double sx = 0.0, sy = 0.0;
    std::uint64_t n = 0;
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x)
            if (mask.at(x, y)) {
                sx += x;
                sy += y;
                ++n;
            }
    if (n == 0) return std::nullopt;
    DiscReference ref;
    ref.center = {static_cast<int>(std::lround(sx / static_cast<double>(n))),
                  static_cast<int>(std::lround(sy / static_cast<double>(n)))};
    ref.radius = std::sqrt(static_cast<double>(n) / M_PI);
    return ref;
}

double default_hit_tolerance(int width, int height) {
    return 0.05 * std::hypot(static_cast<double>(width), static_cast<double>(height));
}

bool od_hit(const OdLocation& pred, Point gt_center, double tol_radius) {
    if (!(tol_radius > 0.0)) throw std::invalid_argument("od_hit: tolerance radius must be positive");
    const double d = std::hypot(static_cast<double>(pred.center_full.x - gt_center.x),
                                static_cast<double>(pred.center_full.y - gt_center.y));
    return d <= tol_radius;
}

}  // namespace retina::eval
