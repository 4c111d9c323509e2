#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace retina::dcnn {

std::vector<double> relu(std::span<const double> x);
/// Logistic function evaluated without overflow for any finite input.
double sigmoid(double x);
std::vector<double> sigmoid(std::span<const double> x);

constexpr double kProbEpsilon = 1e-12;

/// Mean binary cross-entropy with probabilities clamped to [eps, 1 - eps].
double bce_loss(std::span<const double> labels, std::span<const double> probs);

struct AdamHyper {
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    std::int64_t t = 0;
    std::vector<double> m;
    std::vector<double> v;
    AdamHyper hyper;

    static AdamState fresh(std::size_t n, AdamHyper hyper = {});
};

struct AdamResult {
    std::vector<double> params;
    AdamState state;
};

/// One bias-corrected Adam update. Returns new values; inputs are untouched.
AdamResult adam_step(std::span<const double> params, std::span<const double> grads, const AdamState& state);

enum class LayerKind { conv, maxpool, flatten, dense };
enum class Padding { same, valid };

struct LayerSpec {
    LayerKind kind = LayerKind::conv;
    int kernel = 3;
    int stride = 1;
    Padding padding = Padding::same;
    /// Feature maps for conv, neurons for dense; unused otherwise.
    int out_features = 0;
    std::string activation;

    static LayerSpec conv(int features, int kernel = 3, int stride = 1, Padding padding = Padding::same);
    static LayerSpec maxpool(int kernel = 2, int stride = 2);
    static LayerSpec flatten();
    static LayerSpec dense(int neurons, std::string activation = "relu");
};

struct Shape {
    int height = 0;
    int width = 0;
    int channels = 0;
    friend bool operator==(const Shape&, const Shape&) = default;
};

struct TracedLayer {
    LayerSpec spec;
    Shape output;
    std::int64_t params = 0;
};

struct ShapeTrace {
    Shape input;
    std::vector<TracedLayer> layers;

    Shape output() const { return layers.empty() ? input : layers.back().output; }
    std::int64_t total_params() const;
};

class InvalidArchitecture : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// floor((n + 2p - k) / s) + 1, with p = k / 2 for same padding.
int output_extent(int n, int kernel, int stride, Padding padding);

/// Propagates the input shape through the layers. Throws InvalidArchitecture
/// when a dimension becomes non-positive or a layer is malformed.
ShapeTrace trace_shapes(Shape input, const std::vector<LayerSpec>& layers);

/// Problems with respect to the reference grading network: 3x3 convs only,
/// 14 of them in 4 stages split by 3 stride-2 2x2 pools, then flatten,
/// dense-1024 ReLU and a single sigmoid neuron. Empty when the trace conforms.
std::vector<std::string> check_reference_layout(const ShapeTrace& trace);

/// 300x300x3 input, stages of 2/3/4/5 convs (64/128/256/512 maps), FC-1024, 1 output.
std::vector<LayerSpec> reference_architecture();

/// One layer per line: `conv <features> [kernel] [stride] [same|valid]`,
/// `maxpool [kernel] [stride]`, `flatten`, `dense <neurons> [activation]`.
/// Blank lines and text after '#' are ignored.
std::vector<LayerSpec> parse_architecture(std::istream& in);
/// Parses "HxWxC", e.g. "300x300x3".
Shape parse_shape(const std::string& text);

void print_trace(std::ostream& os, const ShapeTrace& trace);

}  // namespace retina::dcnn
