#include "retina/dcnn.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace retina::dcnn {

namespace {

const char* kind_name(LayerKind k) {
    switch (k) {
        case LayerKind::conv: return "conv";
        case LayerKind::maxpool: return "maxpool";
        case LayerKind::flatten: return "flatten";
        case LayerKind::dense: return "dense";
    }
    return "?";
}

}  // namespace

std::vector<double> relu(std::span<const double> x) {
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [](double v) { return v > 0.0 ? v : 0.0; });
    return out;
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

std::vector<double> sigmoid(std::span<const double> x) {
    std::vector<double> out(x.size());
    std::transform(x.begin(), x.end(), out.begin(), [](double v) { return sigmoid(v); });
    return out;
}

double bce_loss(std::span<const double> labels, std::span<const double> probs) {
    if (labels.empty() || labels.size() != probs.size())
        throw std::invalid_argument("bce_loss: labels and probabilities must be non-empty and equal length");
    double sum = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double p = std::clamp(probs[i], kProbEpsilon, 1.0 - kProbEpsilon);
        const double y = labels[i];
        sum += y * std::log(p) + (1.0 - y) * std::log1p(-p);
    }
    return -sum / static_cast<double>(labels.size());
}

AdamState AdamState::fresh(std::size_t n, AdamHyper hyper) {
    AdamState s;
    s.m.assign(n, 0.0);
    s.v.assign(n, 0.0);
    s.hyper = hyper;
    return s;
}

AdamResult adam_step(std::span<const double> params, std::span<const double> grads, const AdamState& state) {
    if (params.size() != grads.size() || state.m.size() != params.size() || state.v.size() != params.size())
        throw std::invalid_argument("adam_step: parameter, gradient and moment lengths differ");
    const AdamHyper& hp = state.hyper;
    AdamResult out;
    out.state = state;
    out.state.t = state.t + 1;
    const double c1 = 1.0 - std::pow(hp.beta1, static_cast<double>(out.state.t));
    const double c2 = 1.0 - std::pow(hp.beta2, static_cast<double>(out.state.t));
    out.params.assign(params.begin(), params.end());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        double& m = out.state.m[i];
        double& v = out.state.v[i];
        m = hp.beta1 * m + (1.0 - hp.beta1) * g;
        v = hp.beta2 * v + (1.0 - hp.beta2) * g * g;
        const double mhat = m / c1;
        const double vhat = v / c2;
        out.params[i] -= hp.lr * mhat / (std::sqrt(vhat) + hp.eps);
    }
    return out;
}

LayerSpec LayerSpec::conv(int features, int kernel, int stride, Padding padding) {
    return {LayerKind::conv, kernel, stride, padding, features, "relu"};
}

LayerSpec LayerSpec::maxpool(int kernel, int stride) {
    return {LayerKind::maxpool, kernel, stride, Padding::valid, 0, ""};
}

LayerSpec LayerSpec::flatten() { return {LayerKind::flatten, 0, 1, Padding::valid, 0, ""}; }

LayerSpec LayerSpec::dense(int neurons, std::string activation) {
    return {LayerKind::dense, 0, 1, Padding::valid, neurons, std::move(activation)};
}

std::int64_t ShapeTrace::total_params() const {
    std::int64_t total = 0;
    for (const auto& l : layers) total += l.params;
    return total;
}

int output_extent(int n, int kernel, int stride, Padding padding) {
    const int pad = padding == Padding::same ? kernel / 2 : 0;
    const int span = n + 2 * pad - kernel;
    if (span < 0) return 0;
    return span / stride + 1;
}

ShapeTrace trace_shapes(Shape input, const std::vector<LayerSpec>& layers) {
    if (input.height < 1 || input.width < 1 || input.channels < 1)
        throw InvalidArchitecture("input shape must be positive");
    ShapeTrace trace;
    trace.input = input;
    Shape cur = input;
    bool flat = false;
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const LayerSpec& l = layers[i];
        const std::string where = "layer " + std::to_string(i + 1) + " (" + kind_name(l.kind) + ")";
        TracedLayer t{l, cur, 0};
        switch (l.kind) {
            case LayerKind::conv:
            case LayerKind::maxpool: {
                if (flat) throw InvalidArchitecture(where + ": spatial layer after flatten");
                if (l.kernel < 1 || l.stride < 1) throw InvalidArchitecture(where + ": kernel and stride must be positive");
                t.output.height = output_extent(cur.height, l.kernel, l.stride, l.padding);
                t.output.width = output_extent(cur.width, l.kernel, l.stride, l.padding);
                if (l.kind == LayerKind::conv) {
                    if (l.out_features < 1) throw InvalidArchitecture(where + ": feature count must be positive");
                    t.output.channels = l.out_features;
                    t.params = (static_cast<std::int64_t>(l.kernel) * l.kernel * cur.channels + 1) * l.out_features;
                }
                break;
            }
            case LayerKind::flatten:
                t.output = {1, 1, cur.height * cur.width * cur.channels};
                flat = true;
                break;
            case LayerKind::dense:
                if (!flat && (cur.height != 1 || cur.width != 1))
                    throw InvalidArchitecture(where + ": dense layer needs a flattened input");
                if (l.out_features < 1) throw InvalidArchitecture(where + ": neuron count must be positive");
                t.output = {1, 1, l.out_features};
                t.params = (static_cast<std::int64_t>(cur.channels) + 1) * l.out_features;
                flat = true;
                break;
        }
        if (t.output.height < 1 || t.output.width < 1 || t.output.channels < 1)
            throw InvalidArchitecture(where + ": non-positive output dimension");
        cur = t.output;
        trace.layers.push_back(std::move(t));
    }
    return trace;
}

std::vector<std::string> check_reference_layout(const ShapeTrace& trace) {
    std::vector<std::string> problems;
    int convs = 0, pools = 0, stages = 0;
    bool in_stage = false;
    std::vector<const TracedLayer*> dense;
    for (const auto& l : trace.layers) {
        switch (l.spec.kind) {
            case LayerKind::conv:
                ++convs;
                if (!in_stage) {
                    ++stages;
                    in_stage = true;
                }
                if (l.spec.kernel != 3) problems.push_back("conv kernel is not 3x3");
                break;
            case LayerKind::maxpool:
                ++pools;
                in_stage = false;
                if (l.spec.kernel != 2 || l.spec.stride != 2) problems.push_back("pool is not 2x2 with stride 2");
                break;
            case LayerKind::flatten: in_stage = false; break;
            case LayerKind::dense: dense.push_back(&l); break;
        }
    }
    if (convs != 14) problems.push_back("expected 14 conv layers, found " + std::to_string(convs));
    if (stages != 4) problems.push_back("expected 4 conv stages, found " + std::to_string(stages));
    if (pools != 3) problems.push_back("expected 3 pooling layers, found " + std::to_string(pools));
    if (dense.size() != 2) {
        problems.push_back("expected 2 dense layers, found " + std::to_string(dense.size()));
    } else {
        if (dense[0]->spec.out_features != 1024) problems.push_back("first dense layer must have 1024 neurons");
        if (dense[1]->spec.out_features != 1 || dense[1]->spec.activation != "sigmoid")
            problems.push_back("final layer must be a single sigmoid neuron");
    }
    return problems;
}

std::vector<LayerSpec> reference_architecture() {
    std::vector<LayerSpec> layers;
    const int per_stage[] = {2, 3, 4, 5};
    const int features[] = {64, 128, 256, 512};
    for (int s = 0; s < 4; ++s) {
        for (int i = 0; i < per_stage[s]; ++i) layers.push_back(LayerSpec::conv(features[s]));
        if (s < 3) layers.push_back(LayerSpec::maxpool());
    }
    layers.push_back(LayerSpec::flatten());
    layers.push_back(LayerSpec::dense(1024, "relu"));
    layers.push_back(LayerSpec::dense(1, "sigmoid"));
    return layers;
}

std::vector<LayerSpec> parse_architecture(std::istream& in) {
    std::vector<LayerSpec> layers;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string kind;
        if (!(ss >> kind)) continue;
        std::vector<std::string> args;
        for (std::string a; ss >> a;) args.push_back(a);
        auto num = [&](std::size_t i, int fallback) {
            if (i >= args.size()) return fallback;
            try {
                return std::stoi(args[i]);
            } catch (const std::exception&) {
                throw InvalidArchitecture("line " + std::to_string(lineno) + ": expected a number, got '" + args[i] + "'");
            }
        };
        if (kind == "conv") {
            if (args.empty()) throw InvalidArchitecture("line " + std::to_string(lineno) + ": conv needs a feature count");
            Padding pad = Padding::same;
            if (args.size() > 3) {
                if (args[3] == "valid") pad = Padding::valid;
                else if (args[3] != "same") throw InvalidArchitecture("line " + std::to_string(lineno) + ": padding must be same or valid");
            }
            layers.push_back(LayerSpec::conv(num(0, 0), num(1, 3), num(2, 1), pad));
        } else if (kind == "maxpool") {
            layers.push_back(LayerSpec::maxpool(num(0, 2), num(1, 2)));
        } else if (kind == "flatten") {
            layers.push_back(LayerSpec::flatten());
        } else if (kind == "dense") {
            if (args.empty()) throw InvalidArchitecture("line " + std::to_string(lineno) + ": dense needs a neuron count");
            layers.push_back(LayerSpec::dense(num(0, 0), args.size() > 1 ? args[1] : "relu"));
        } else {
            throw InvalidArchitecture("line " + std::to_string(lineno) + ": unknown layer kind '" + kind + "'");
        }
    }
    return layers;
}

Shape parse_shape(const std::string& text) {
    Shape s;
    char x1 = 0, x2 = 0;
    std::istringstream ss(text);
    if (!(ss >> s.height >> x1 >> s.width >> x2 >> s.channels) || x1 != 'x' || x2 != 'x' || !ss.eof())
        throw std::invalid_argument("shape must look like HxWxC, got '" + text + "'");
    return s;
}

void print_trace(std::ostream& os, const ShapeTrace& trace) {
    os << std::left << std::setw(4) << "#" << std::setw(16) << "layer" << std::setw(10) << "kernel"
       << std::setw(18) << "output (HxWxC)" << std::right << std::setw(14) << "params" << '\n';
    os << std::left << std::setw(4) << "0" << std::setw(16) << "input" << std::setw(10) << "-"
       << std::setw(18)
       << (std::to_string(trace.input.height) + "x" + std::to_string(trace.input.width) + "x" +
           std::to_string(trace.input.channels))
       << std::right << std::setw(14) << 0 << '\n';
    for (std::size_t i = 0; i < trace.layers.size(); ++i) {
        const auto& l = trace.layers[i];
        std::string kernel = "-";
        if (l.spec.kind == LayerKind::conv || l.spec.kind == LayerKind::maxpool)
            kernel = std::to_string(l.spec.kernel) + "x" + std::to_string(l.spec.kernel) + "/" + std::to_string(l.spec.stride);
        std::string name = kind_name(l.spec.kind);
        if (l.spec.kind == LayerKind::dense && !l.spec.activation.empty()) name += "(" + l.spec.activation + ")";
        os << std::left << std::setw(4) << (i + 1) << std::setw(16) << name << std::setw(10) << kernel << std::setw(18)
           << (std::to_string(l.output.height) + "x" + std::to_string(l.output.width) + "x" + std::to_string(l.output.channels))
           << std::right << std::setw(14) << l.params << '\n';
    }
    os << "total params: " << trace.total_params() << '\n';
}

}  // namespace retina::dcnn
