#include "retina/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace retina {

namespace {

using Histogram = std::array<std::uint64_t, 256>;

Histogram histogram_of(const GrayImage& img) {
    Histogram h{};
    for (std::uint8_t v : img.data()) ++h[v];
    return h;
}

// Intensity at cumulative fraction q of the pixel population.
int quantile(const Histogram& h, std::uint64_t total, double q) {
    const auto target = static_cast<std::uint64_t>(std::floor(q * static_cast<double>(total)));
    std::uint64_t cum = 0;
    for (int v = 0; v < 256; ++v) {
        cum += h[static_cast<std::size_t>(v)];
        if (cum > target) return v;
    }
    return 255;
}

// Dedupes seeds and tops them up with the unused intensity farthest from
// every existing seed until `want` distinct centres exist.
std::vector<double> complete_seeds(std::vector<double> seeds, const std::vector<int>& distinct, std::size_t want) {
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    while (seeds.size() < want) {
        double best = -1.0;
        int pick = -1;
        for (int v : distinct) {
            double d = std::numeric_limits<double>::max();
            for (double c : seeds) d = std::min(d, std::abs(c - v));
            if (d > best) {
                best = d;
                pick = v;
            }
        }
        seeds.push_back(pick);
        std::sort(seeds.begin(), seeds.end());
    }
    return seeds;
}

// Exact 1-D optimum: optimal clusters are runs of consecutive intensities, so
// a DP over the occupied histogram bins finds them. Returns the cluster means.
std::vector<double> optimal_centers(const Histogram& h, const std::vector<int>& distinct, std::size_t k) {
    const std::size_t n = distinct.size();
    std::vector<double> cnt(n + 1, 0.0), sum(n + 1, 0.0), sq(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = static_cast<double>(h[static_cast<std::size_t>(distinct[i])]), v = distinct[i];
        cnt[i + 1] = cnt[i] + c;
        sum[i + 1] = sum[i] + c * v;
        sq[i + 1] = sq[i] + c * v * v;
    }
    // Squared error of bins [a, b).
    auto cost = [&](std::size_t a, std::size_t b) {
        const double c = cnt[b] - cnt[a], s = sum[b] - sum[a];
        return std::max(0.0, sq[b] - sq[a] - s * s / c);
    };
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> best(k + 1, std::vector<double>(n + 1, inf));
    std::vector<std::vector<std::size_t>> cut(k + 1, std::vector<std::size_t>(n + 1, 0));
    best[0][0] = 0.0;
    for (std::size_t c = 1; c <= k; ++c)
        for (std::size_t b = c; b <= n; ++b)
            for (std::size_t a = c - 1; a < b; ++a) {
                const double j = best[c - 1][a] + cost(a, b);
                if (j < best[c][b]) {
                    best[c][b] = j;
                    cut[c][b] = a;
                }
            }
    std::vector<double> centers(k);
    for (std::size_t c = k, b = n; c > 0; --c) {
        const std::size_t a = cut[c][b];
        centers[c - 1] = (sum[b] - sum[a]) / (cnt[b] - cnt[a]);
        b = a;
    }
    return centers;
}

struct ScalarRun {
    std::vector<double> centers;
    std::array<int, 256> label_of{};
    double objective = 0.0;
    std::vector<double> history;
    int iterations = 0;
};

double assign(const Histogram& h, const std::vector<double>& centers, std::array<int, 256>& label_of) {
    double objective = 0.0;
    for (int v = 0; v < 256; ++v) {
        int best = 0;
        double bd = std::numeric_limits<double>::max();
        for (std::size_t c = 0; c < centers.size(); ++c) {
            const double d = (centers[c] - v) * (centers[c] - v);
            if (d < bd) {
                bd = d;
                best = static_cast<int>(c);
            }
        }
        label_of[static_cast<std::size_t>(v)] = best;
        objective += static_cast<double>(h[static_cast<std::size_t>(v)]) * bd;
    }
    return objective;
}

ScalarRun lloyd(const Histogram& h, std::vector<double> centers, const KMeansOptions& opt) {
    ScalarRun run;
    const int max_iter = std::max(opt.max_iter, 1);
    for (int it = 0; it < max_iter; ++it) {
        const double objective = assign(h, centers, run.label_of);
        run.history.push_back(objective);
        run.iterations = it + 1;
        run.objective = objective;
        if (it > 0 && run.history[run.history.size() - 2] - objective < opt.tol) break;
        if (it == max_iter - 1) break;
        std::vector<double> sum(centers.size(), 0.0);
        std::vector<std::uint64_t> count(centers.size(), 0);
        for (int v = 0; v < 256; ++v) {
            const auto c = static_cast<std::size_t>(run.label_of[static_cast<std::size_t>(v)]);
            sum[c] += static_cast<double>(h[static_cast<std::size_t>(v)]) * v;
            count[c] += h[static_cast<std::size_t>(v)];
        }
        for (std::size_t c = 0; c < centers.size(); ++c)
            if (count[c] > 0) centers[c] = sum[c] / static_cast<double>(count[c]);
    }
    run.centers = std::move(centers);
    return run;
}

}  // namespace

double kmeans_objective(const GrayImage& img, const std::vector<int>& labels, const std::vector<double>& centers) {
    if (labels.size() != img.size()) throw std::invalid_argument("kmeans_objective: label count mismatch");
    double j = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double d = centers.at(static_cast<std::size_t>(labels[i])) - img.data()[i];
        j += d * d;
    }
    return j;
}

KMeansResult kmeans_intensity(const GrayImage& img, int k, const KMeansOptions& options) {
    if (k < 1) throw std::invalid_argument("kmeans_intensity: k must be >= 1");
    const Histogram h = histogram_of(img);
    std::vector<int> distinct;
    for (int v = 0; v < 256; ++v)
        if (h[static_cast<std::size_t>(v)]) distinct.push_back(v);
    const auto total = static_cast<std::uint64_t>(img.size());
    const std::size_t effective = std::min<std::size_t>(static_cast<std::size_t>(k), distinct.size());

    std::vector<double> seeds;
    for (int i = 0; i < k; ++i) seeds.push_back(quantile(h, total, (i + 0.5) / k));
    seeds = complete_seeds(std::move(seeds), distinct, effective);
    seeds.resize(std::min(seeds.size(), effective));

    ScalarRun best = lloyd(h, seeds, options);
    if (options.exact_candidate && effective > 1) {
        ScalarRun run = lloyd(h, optimal_centers(h, distinct, effective), options);
        if (run.objective < best.objective) best = std::move(run);
    }
    if (options.random_restarts > 0) {
        std::mt19937_64 rng(options.seed);
        for (int r = 0; r < options.random_restarts; ++r) {
            std::vector<int> pool = distinct;
            std::shuffle(pool.begin(), pool.end(), rng);
            std::vector<double> init(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(effective));
            std::sort(init.begin(), init.end());
            ScalarRun run = lloyd(h, std::move(init), options);
            if (run.objective < best.objective) best = std::move(run);
        }
    }

    KMeansResult out;
    out.k = static_cast<int>(best.centers.size());
    out.requested_k = k;
    out.centers = best.centers;
    out.width = img.width();
    out.height = img.height();
    out.objective = best.objective;
    out.history = best.history;
    out.iterations = best.iterations;
    out.labels.resize(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) out.labels[i] = best.label_of[img.data()[i]];
    return out;
}

BinaryMask brightest_cluster_mask(const KMeansResult& r) {
    if (r.centers.empty() || r.labels.size() != static_cast<std::size_t>(r.width) * r.height)
        throw std::invalid_argument("brightest_cluster_mask: malformed k-means result");
    int top = 0;
    for (int c = 1; c < static_cast<int>(r.centers.size()); ++c)
        if (r.centers[static_cast<std::size_t>(c)] >= r.centers[static_cast<std::size_t>(top)]) top = c;
    BinaryMask out(r.width, r.height);
    for (std::size_t i = 0; i < r.labels.size(); ++i) out.data()[i] = r.labels[i] == top ? 1 : 0;
    return out;
}

GrayImage quantize(const KMeansResult& r) {
    GrayImage out(r.width, r.height);
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
        const double c = r.centers[static_cast<std::size_t>(r.labels[i])];
        out.data()[i] = static_cast<std::uint8_t>(std::clamp(std::lround(c), 0L, 255L));
    }
    return out;
}

ColorKMeansResult kmeans_color(const RgbImage& img, int k, const KMeansOptions& options) {
    if (k < 1) throw std::invalid_argument("kmeans_color: k must be >= 1");
    auto pack = [](const Rgb& p) { return (std::uint32_t{p.r} << 16) | (std::uint32_t{p.g} << 8) | p.b; };
    auto luma = [](const std::array<double, 3>& c) { return 0.299 * c[0] + 0.587 * c[1] + 0.114 * c[2]; };

    // Collapse to unique colours with multiplicities; order by (luma, code) for determinism.
    std::unordered_map<std::uint32_t, std::uint64_t> counts;
    for (const Rgb& p : img.data()) ++counts[pack(p)];
    struct Entry {
        std::array<double, 3> rgb;
        std::uint64_t n;
        std::uint32_t code;
    };
    std::vector<Entry> colors;
    colors.reserve(counts.size());
    for (const auto& [code, n] : counts)
        colors.push_back({{double(code >> 16), double((code >> 8) & 0xff), double(code & 0xff)}, n, code});
    std::sort(colors.begin(), colors.end(), [&](const Entry& a, const Entry& b) {
        const double la = luma(a.rgb), lb = luma(b.rgb);
        return la != lb ? la < lb : a.code < b.code;
    });

    const std::size_t effective = std::min<std::size_t>(static_cast<std::size_t>(k), colors.size());
    const auto total = static_cast<std::uint64_t>(img.size());
    std::vector<std::size_t> seed_idx;
    for (int i = 0; i < k && seed_idx.size() < effective; ++i) {
        const auto target = static_cast<std::uint64_t>(std::floor((i + 0.5) / k * static_cast<double>(total)));
        std::uint64_t cum = 0;
        std::size_t idx = colors.size() - 1;
        for (std::size_t c = 0; c < colors.size(); ++c) {
            cum += colors[c].n;
            if (cum > target) {
                idx = c;
                break;
            }
        }
        if (std::find(seed_idx.begin(), seed_idx.end(), idx) == seed_idx.end()) seed_idx.push_back(idx);
    }
    for (std::size_t c = 0; seed_idx.size() < effective; ++c)
        if (std::find(seed_idx.begin(), seed_idx.end(), c) == seed_idx.end()) seed_idx.push_back(c);
    std::sort(seed_idx.begin(), seed_idx.end());

    auto run = [&](std::vector<std::array<double, 3>> centers) {
        std::vector<int> label(colors.size(), 0);
        std::vector<double> history;
        double objective = 0.0;
        const int max_iter = std::max(options.max_iter, 1);
        int iterations = 0;
        for (int it = 0; it < max_iter; ++it) {
            objective = 0.0;
            for (std::size_t i = 0; i < colors.size(); ++i) {
                double bd = std::numeric_limits<double>::max();
                for (std::size_t c = 0; c < centers.size(); ++c) {
                    double d = 0.0;
                    for (int ch = 0; ch < 3; ++ch) {
                        const double e = centers[c][static_cast<std::size_t>(ch)] - colors[i].rgb[static_cast<std::size_t>(ch)];
                        d += e * e;
                    }
                    if (d < bd) {
                        bd = d;
                        label[i] = static_cast<int>(c);
                    }
                }
                objective += bd * static_cast<double>(colors[i].n);
            }
            history.push_back(objective);
            iterations = it + 1;
            if (it > 0 && history[history.size() - 2] - objective < options.tol) break;
            if (it == max_iter - 1) break;
            std::vector<std::array<double, 3>> sum(centers.size(), {0.0, 0.0, 0.0});
            std::vector<std::uint64_t> count(centers.size(), 0);
            for (std::size_t i = 0; i < colors.size(); ++i) {
                const auto c = static_cast<std::size_t>(label[i]);
                for (int ch = 0; ch < 3; ++ch)
                    sum[c][static_cast<std::size_t>(ch)] += colors[i].rgb[static_cast<std::size_t>(ch)] * static_cast<double>(colors[i].n);
                count[c] += colors[i].n;
            }
            for (std::size_t c = 0; c < centers.size(); ++c)
                if (count[c] > 0)
                    for (int ch = 0; ch < 3; ++ch)
                        centers[c][static_cast<std::size_t>(ch)] = sum[c][static_cast<std::size_t>(ch)] / static_cast<double>(count[c]);
        }
        return std::tuple{centers, label, objective, history, iterations};
    };

    std::vector<std::array<double, 3>> init;
    for (std::size_t i : seed_idx) init.push_back(colors[i].rgb);
    auto best = run(init);
    if (options.random_restarts > 0) {
        std::mt19937_64 rng(options.seed);
        for (int r = 0; r < options.random_restarts; ++r) {
            std::vector<std::size_t> pool(colors.size());
            for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
            std::shuffle(pool.begin(), pool.end(), rng);
            std::vector<std::array<double, 3>> rinit;
            for (std::size_t i = 0; i < effective; ++i) rinit.push_back(colors[pool[i]].rgb);
            auto cand = run(rinit);
            if (std::get<2>(cand) < std::get<2>(best)) best = std::move(cand);
        }
    }

    auto& [centers, label, objective, history, iterations] = best;
    std::unordered_map<std::uint32_t, int> label_of;
    for (std::size_t i = 0; i < colors.size(); ++i) label_of[colors[i].code] = label[i];

    ColorKMeansResult out;
    out.colors = centers;
    KMeansResult& s = out.summary;
    s.k = static_cast<int>(centers.size());
    s.requested_k = k;
    for (const auto& c : centers) s.centers.push_back(luma(c));
    s.width = img.width();
    s.height = img.height();
    s.objective = objective;
    s.history = history;
    s.iterations = iterations;
    s.labels.resize(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) s.labels[i] = label_of[pack(img.data()[i])];
    return out;
}

}  // namespace retina
