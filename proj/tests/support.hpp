// Shared test helpers: random images, brute-force oracles and synthetic
// fundus scenes. Oracles here never call into the library routine they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "retina/image.hpp"

namespace retina::test {

inline GrayImage random_gray(std::mt19937_64& rng, int w, int h, int lo = 0, int hi = 255) {
    std::uniform_int_distribution<int> d(lo, hi);
    GrayImage img(w, h);
    for (auto& p : img.data()) p = static_cast<std::uint8_t>(d(rng));
    return img;
}

inline BinaryMask random_mask(std::mt19937_64& rng, int w, int h, double p = 0.5) {
    std::bernoulli_distribution d(p);
    BinaryMask m(w, h);
    for (auto& v : m.data()) v = d(rng) ? 1 : 0;
    return m;
}

inline RgbImage gray_to_rgb(const GrayImage& g) {
    RgbImage out(g.width(), g.height());
    for (std::size_t i = 0; i < g.size(); ++i) out.data()[i] = Rgb{g.data()[i], g.data()[i], g.data()[i]};
    return out;
}

/// Lattice points (x, y) with (x - cx)^2 + (y - cy)^2 <= r^2 inside the grid.
inline std::size_t lattice_disc_count(int w, int h, int cx, int cy, double r) {
    std::size_t n = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r * r) ++n;
        }
    return n;
}

/// Cells of the (w x h) box satisfying (dx/a)^2 + (dy/b)^2 <= 1.
inline int ellipse_inequality_count(int w, int h) {
    const int a = (w - 1) / 2, b = (h - 1) / 2;
    int n = 0;
    for (int dy = -b; dy <= b; ++dy)
        for (int dx = -a; dx <= a; ++dx) {
            const double u = a ? double(dx) / a : 0.0, v = b ? double(dy) / b : 0.0;
            if (u * u + v * v <= 1.0) ++n;
        }
    return n;
}

/// Sort-based k x k median with edge replication.
inline std::uint8_t brute_median(const GrayImage& img, int x, int y, int k) {
    std::vector<int> vals;
    for (int dy = -k / 2; dy <= k / 2; ++dy)
        for (int dx = -k / 2; dx <= k / 2; ++dx) {
            const int sx = std::clamp(x + dx, 0, img.width() - 1);
            const int sy = std::clamp(y + dy, 0, img.height() - 1);
            vals.push_back(img.at(sx, sy));
        }
    std::sort(vals.begin(), vals.end());
    return static_cast<std::uint8_t>(vals[vals.size() / 2]);
}

/// Direct double-sum normalized correlation coefficient at one placement.
inline double brute_nccoeff(const GrayImage& img, const GrayImage& t, int x, int y) {
    const int w = t.width(), h = t.height();
    double tm = 0, im = 0;
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) {
            tm += t.at(i, j);
            im += img.at(x + i, y + j);
        }
    tm /= w * h;
    im /= w * h;
    double num = 0, tt = 0, ii = 0;
    for (int j = 0; j < h; ++j)
        for (int i = 0; i < w; ++i) {
            const double a = t.at(i, j) - tm, b = img.at(x + i, y + j) - im;
            num += a * b;
            tt += a * a;
            ii += b * b;
        }
    if (tt < 1e-9 || ii < 1e-9) return 0.0;
    return num / std::sqrt(tt * ii);
}

/// 8-connected flood fill labelling; returns per-pixel component sizes.
inline std::vector<std::size_t> flood_component_sizes(const BinaryMask& m) {
    const int w = m.width(), h = m.height();
    std::vector<int> lab(m.size(), -1);
    std::vector<std::size_t> sizes;
    for (int sy = 0; sy < h; ++sy)
        for (int sx = 0; sx < w; ++sx) {
            if (!m.at(sx, sy) || lab[static_cast<std::size_t>(sy * w + sx)] >= 0) continue;
            const int id = static_cast<int>(sizes.size());
            std::vector<std::pair<int, int>> queue{{sx, sy}};
            lab[static_cast<std::size_t>(sy * w + sx)] = id;
            for (std::size_t q = 0; q < queue.size(); ++q) {
                const auto [x, y] = queue[q];
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = x + dx, ny = y + dy;
                        if (nx < 0 || ny < 0 || nx >= w || ny >= h || !m.at(nx, ny)) continue;
                        auto& l = lab[static_cast<std::size_t>(ny * w + nx)];
                        if (l < 0) {
                            l = id;
                            queue.push_back({nx, ny});
                        }
                    }
            }
            sizes.push_back(queue.size());
        }
    std::vector<std::size_t> per_pixel(m.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i)
        if (lab[i] >= 0) per_pixel[i] = sizes[static_cast<std::size_t>(lab[i])];
    return per_pixel;
}

/// Best 1-D two-cluster objective over every threshold split of the values.
inline double best_threshold_split_objective(const GrayImage& img) {
    std::vector<double> v(img.data().begin(), img.data().end());
    std::sort(v.begin(), v.end());
    double best = 1e300;
    for (std::size_t cut = 0; cut <= v.size(); ++cut) {
        double j = 0;
        for (int part = 0; part < 2; ++part) {
            const std::size_t b = part ? cut : 0, e = part ? v.size() : cut;
            if (b == e) continue;
            double mean = 0;
            for (std::size_t i = b; i < e; ++i) mean += v[i];
            mean /= static_cast<double>(e - b);
            for (std::size_t i = b; i < e; ++i) j += (v[i] - mean) * (v[i] - mean);
        }
        best = std::min(best, j);
    }
    return best;
}

inline std::uint8_t clamp_u8(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

/// Fundus-like 300x300 scene: black outside a circular field of view, a
/// reddish shaded retina with a few dark vessel arcs, one bright disc, and
/// additive Gaussian noise.
struct DiscScene {
    RgbImage image;
    Point center;
    int radius = 0;
};

inline DiscScene fundus_with_disc(std::mt19937_64& rng, int size, int radius, Point center, double noise_sigma) {
    std::normal_distribution<double> noise(0.0, noise_sigma);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double fov_r = size * 0.48, c = (size - 1) / 2.0;
    // Vessel arcs: circles through the disc with random curvature.
    struct Arc {
        double cx, cy, r;
    };
    std::vector<Arc> arcs;
    for (int i = 0; i < 4; ++i) {
        const double ang = u(rng) * 2 * M_PI, rr = size * (0.3 + 0.5 * u(rng));
        arcs.push_back({center.x + rr * std::cos(ang), center.y + rr * std::sin(ang), rr});
    }
    RgbImage img(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            const double dc = std::hypot(x - c, y - c);
            if (dc > fov_r) {
                img.at(x, y) = Rgb{clamp_u8(noise(rng) * 0.25), clamp_u8(noise(rng) * 0.25), clamp_u8(noise(rng) * 0.25)};
                continue;
            }
            double r = 150 - 40 * dc / fov_r, g = 70 - 20 * dc / fov_r, b = 30;
            for (const auto& a : arcs)
                if (std::abs(std::hypot(x - a.cx, y - a.cy) - a.r) < 1.5) {
                    r -= 45;
                    g -= 30;
                }
            if (std::hypot(x - center.x, y - center.y) <= radius) {
                r = 250;
                g = 220;
                b = 150;
            }
            img.at(x, y) = Rgb{clamp_u8(r + noise(rng)), clamp_u8(g + noise(rng)), clamp_u8(b + noise(rng))};
        }
    return {std::move(img), center, radius};
}

/// Dark background, one large bright disc standing in for the optic disc and
/// small bright blobs standing in for exudates, all kept clear of the disc.
struct ExudateScene {
    RgbImage image;
    Point od_center;
    int od_radius = 0;
    BinaryMask blobs;
    int blob_count = 0;
};

inline ExudateScene exudate_scene(std::mt19937_64& rng, int size, int blob_count, double noise_sigma = 4.0) {
    std::uniform_int_distribution<int> pos(0, size - 1);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    ExudateScene s;
    s.od_radius = size * 22 / 300;  // template radius at this resolution
    std::uniform_int_distribution<int> odpos(size / 5, size - size / 5);
    s.od_center = {odpos(rng), odpos(rng)};
    s.blobs = BinaryMask(size, size);
    std::uniform_int_distribution<int> br(3, 6);
    const double keep_out = s.od_radius * 1.5 + 25;
    std::vector<std::pair<Point, int>> placed;
    while (static_cast<int>(placed.size()) < blob_count) {
        const Point p{pos(rng), pos(rng)};
        const int r = br(rng);
        if (p.x < 12 || p.y < 12 || p.x >= size - 12 || p.y >= size - 12) continue;
        if (std::hypot(p.x - s.od_center.x, p.y - s.od_center.y) < keep_out) continue;
        bool clash = false;
        for (const auto& [q, qr] : placed)
            if (std::hypot(p.x - q.x, p.y - q.y) < r + qr + 8) clash = true;
        if (!clash) placed.push_back({p, r});
    }
    s.blob_count = blob_count;
    s.image = RgbImage(size, size);
    for (int y = 0; y < size; ++y)
        for (int x = 0; x < size; ++x) {
            double r = 90, g = 45, b = 20;
            if (std::hypot(x - s.od_center.x, y - s.od_center.y) <= s.od_radius) {
                r = 250;
                g = 230;
                b = 170;
            }
            for (const auto& [q, qr] : placed)
                if (std::hypot(x - q.x, y - q.y) <= qr) {
                    r = 245;
                    g = 225;
                    b = 120;
                    s.blobs.at(x, y) = 1;
                }
            s.image.at(x, y) = Rgb{clamp_u8(r + noise(rng)), clamp_u8(g + noise(rng)), clamp_u8(b + noise(rng))};
        }
    return s;
}

/// Bright background with a branching tree of dark strokes of the given
/// width along random quadratic curves; every stroke after the first starts
/// on an earlier one, like a vessel tree. The stroke raster is the ground truth.
struct StrokeScene {
    RgbImage image;
    BinaryMask strokes;
};

inline StrokeScene stroke_scene(std::mt19937_64& rng, int w, int h, int stroke_count, double width) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    StrokeScene s{RgbImage(w, h, Rgb{200, 170, 90}), BinaryMask(w, h)};
    std::vector<std::pair<double, double>> path, starts;
    for (int k = 0; k < stroke_count; ++k) {
        double x0 = u(rng) * w, y0 = u(rng) * h;
        // Branch points stay apart so junctions do not pile up into dark clumps.
        for (int tries = 0; !path.empty() && tries < 50; ++tries) {
            const auto& p = path[static_cast<std::size_t>(u(rng) * static_cast<double>(path.size()))];
            x0 = p.first;
            y0 = p.second;
            bool apart = true;
            for (const auto& [sx, sy] : starts) apart &= std::hypot(x0 - sx, y0 - sy) >= 40.0;
            if (apart) break;
        }
        starts.emplace_back(x0, y0);
        const double x1 = u(rng) * w, y1 = u(rng) * h;
        const double mx = u(rng) * w, my = u(rng) * h;
        for (double t = 0; t <= 1.0; t += 0.0005) {
            const double px = (1 - t) * (1 - t) * x0 + 2 * (1 - t) * t * mx + t * t * x1;
            const double py = (1 - t) * (1 - t) * y0 + 2 * (1 - t) * t * my + t * t * y1;
            path.emplace_back(px, py);
            const int r = static_cast<int>(std::ceil(width));
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx) {
                    const int x = static_cast<int>(std::lround(px)) + dx, y = static_cast<int>(std::lround(py)) + dy;
                    if (x < 0 || y < 0 || x >= w || y >= h) continue;
                    if (std::hypot(x - px, y - py) <= width / 2.0) {
                        s.strokes.at(x, y) = 1;
                        s.image.at(x, y) = Rgb{140, 80, 40};
                    }
                }
        }
    }
    return s;
}

}  // namespace retina::test
