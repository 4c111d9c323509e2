#include "retina/contours.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace retina {

namespace {

// Clockwise on screen: E, SE, S, SW, W, NW, N, NE.
constexpr std::array<Point, 8> kRing{{{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}}};

int ring_index(Point from, Point to) {
    const int dx = to.x - from.x;
    const int dy = to.y - from.y;
    for (int i = 0; i < 8; ++i)
        if (kRing[static_cast<std::size_t>(i)].x == dx && kRing[static_cast<std::size_t>(i)].y == dy) return i;
    throw std::logic_error("contour tracing: backtrack cell is not a neighbour");
}

struct Step {
    Point next;
    Point back;
    bool found;
};

template <typename Fg>
Step moore_step(Point p, Point back, Fg fg) {
    const int start = ring_index(p, back);
    for (int i = 1; i <= 8; ++i) {
        const int d = (start + i) % 8;
        const Point n{p.x + kRing[static_cast<std::size_t>(d)].x, p.y + kRing[static_cast<std::size_t>(d)].y};
        if (fg(n)) {
            const Point& prev = kRing[static_cast<std::size_t>((d + 7) % 8)];
            return {n, {p.x + prev.x, p.y + prev.y}, true};
        }
    }
    return {p, back, false};
}

}  // namespace

double shoelace_area(std::span<const Point> chain) {
    if (chain.size() < 3) return 0.0;
    long long twice = 0;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const Point& a = chain[i];
        const Point& b = chain[(i + 1) % chain.size()];
        twice += static_cast<long long>(a.x) * b.y - static_cast<long long>(b.x) * a.y;
    }
    return 0.5 * static_cast<double>(twice);
}

ComponentLabels label_components(const BinaryMask& mask) {
    const int w = mask.width();
    const int h = mask.height();
    ComponentLabels out;
    out.labels.assign(mask.size(), 0);
    std::vector<Point> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y * w + x);
            if (!mask.data()[i] || out.labels[i]) continue;
            const int label = static_cast<int>(out.sizes.size()) + 1;
            std::size_t count = 0;
            out.labels[i] = label;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const Point p = stack.back();
                stack.pop_back();
                ++count;
                for (const Point& d : kRing) {
                    const int nx = p.x + d.x;
                    const int ny = p.y + d.y;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    const std::size_t j = static_cast<std::size_t>(ny * w + nx);
                    if (mask.data()[j] && !out.labels[j]) {
                        out.labels[j] = label;
                        stack.push_back({nx, ny});
                    }
                }
            }
            out.sizes.push_back(count);
        }
    }
    return out;
}

std::vector<Contour> find_contours(const BinaryMask& mask) {
    const auto comps = label_components(mask);
    const int w = mask.width();
    std::vector<Contour> contours;
    contours.reserve(comps.sizes.size());
    std::vector<std::uint8_t> started(comps.sizes.size() + 1, 0);

    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < w; ++x) {
            const int label = comps.labels[static_cast<std::size_t>(y * w + x)];
            if (label == 0 || started[static_cast<std::size_t>(label)]) continue;
            started[static_cast<std::size_t>(label)] = 1;

            // Raster-first pixel: its west neighbour is background.
            const Point s{x, y};
            auto fg = [&](Point p) {
                return mask.contains(p.x, p.y) &&
                       comps.labels[static_cast<std::size_t>(p.y * w + p.x)] == label;
            };
            Contour c;
            c.points.push_back(s);
            Step st = moore_step(s, {x - 1, y}, fg);
            if (st.found) {
                const Point first = st.next;
                Point cur = st.next;
                Point back = st.back;
                // Each boundary pixel is entered at most once per ring direction.
                const std::size_t limit = 8 * comps.sizes[static_cast<std::size_t>(label - 1)] + 8;
                for (;;) {
                    if (c.points.size() > limit) throw std::logic_error("find_contours: tracing did not close");
                    const Step nx = moore_step(cur, back, fg);
                    if (cur == s && nx.next == first) break;
                    c.points.push_back(cur);
                    cur = nx.next;
                    back = nx.back;
                }
            }
            c.signed_area = shoelace_area(c.points);
            contours.push_back(std::move(c));
        }
    }
    return contours;
}

BinaryMask filter_blobs(const BinaryMask& mask, std::size_t min_area, std::size_t max_area) {
    if (min_area > max_area) throw std::invalid_argument("filter_blobs: min_area exceeds max_area");
    const auto comps = label_components(mask);
    BinaryMask out(mask.width(), mask.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int label = comps.labels[i];
        if (label == 0) continue;
        const std::size_t n = comps.sizes[static_cast<std::size_t>(label - 1)];
        out.data()[i] = (n >= min_area && n <= max_area) ? 1 : 0;
    }
    return out;
}

BinaryMask fill_contours(const std::vector<Contour>& contours, int width, int height) {
    BinaryMask out(width, height);
    std::vector<double> crossings;
    for (const Contour& c : contours) {
        for (const Point& p : c.points)
            if (out.contains(p.x, p.y)) out.at(p.x, p.y) = 1;
        const auto& pts = c.points;
        if (pts.size() < 3) continue;
        int ymin = pts.front().y, ymax = pts.front().y;
        for (const Point& p : pts) {
            ymin = std::min(ymin, p.y);
            ymax = std::max(ymax, p.y);
        }
        for (int y = std::max(ymin, 0); y <= std::min(ymax, height - 1); ++y) {
            crossings.clear();
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const Point& a = pts[i];
                const Point& b = pts[(i + 1) % pts.size()];
                // Half-open rule so a vertex on the scanline is counted once.
                if ((a.y > y) != (b.y > y))
                    crossings.push_back(a.x + static_cast<double>(y - a.y) * (b.x - a.x) / (b.y - a.y));
            }
            std::sort(crossings.begin(), crossings.end());
            for (std::size_t i = 0; i + 1 < crossings.size(); i += 2) {
                const int x0 = std::max(0, static_cast<int>(std::ceil(crossings[i])));
                const int x1 = std::min(width - 1, static_cast<int>(std::floor(crossings[i + 1])));
                for (int x = x0; x <= x1; ++x) out.at(x, y) = 1;
            }
        }
    }
    return out;
}

}  // namespace retina
