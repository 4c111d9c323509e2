#include <doctest.h>

#include <cmath>
#include <random>

#include "retina/template_match.hpp"
#include "support.hpp"

using namespace retina;

namespace {

GrayImage crop(const GrayImage& img, int x0, int y0, int w, int h) {
    GrayImage out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.at(x, y) = img.at(x0 + x, y0 + y);
    return out;
}

}  // namespace

TEST_SUITE("template") {

TEST_CASE("disc template") {
    const auto dot = generate_disc_template(9, 0);
    CHECK(count_foreground(gray_to_mask(dot)) == 1);
    CHECK(dot.at(4, 4) == 255);
    CHECK(generate_disc_template(11, 3, 80, 80) == GrayImage(11, 11, 80));
    for (int r : {1, 5, 12, 22}) {
        const auto t = generate_disc_template(2 * r + 7, r);
        std::size_t fg = 0;
        for (auto v : t.data()) fg += v == 255;
        CHECK(fg == test::lattice_disc_count(2 * r + 7, 2 * r + 7, r + 3, r + 3, r));
    }
    const auto def = generate_disc_template();
    CHECK(def.width() == 51);
    CHECK(def.at(25, 25) == 255);
    CHECK(def.at(0, 0) == 0);
    CHECK_THROWS_AS(generate_disc_template(10, 5), std::invalid_argument);
}

TEST_CASE("exact crop scores 1, inverted crop -1") {
    std::mt19937_64 rng(50);
    for (int n = 0; n < 20; ++n) {
        const auto img = test::random_gray(rng, 30, 24);
        const auto t = crop(img, 7, 5, 9, 6);
        const auto map = match_template_nccoeff(img, t);
        CHECK(map.width == 22);
        CHECK(map.height == 19);
        CHECK(map.at(7, 5) == doctest::Approx(1.0).epsilon(1e-6));
        GrayImage inv = t;
        for (auto& p : inv.data()) p = static_cast<std::uint8_t>(255 - p);
        CHECK(match_template_nccoeff(img, inv).at(7, 5) == doctest::Approx(-1.0).epsilon(1e-6));
        const auto best = best_match(map);
        CHECK(best.x == 7);
        CHECK(best.y == 5);
    }
}

TEST_CASE("every score matches the double-loop oracle") {
    std::mt19937_64 rng(51);
    for (int n = 0; n < 100; ++n) {
        auto img = test::random_gray(rng, 12, 12);
        // Flat patches exercise the zero-variance rule.
        if (n % 4 == 0)
            for (int y = 0; y < 5; ++y)
                for (int x = 0; x < 5; ++x) img.at(x, y) = 17;
        const auto t = n % 10 == 0 ? GrayImage(3, 3, 9) : test::random_gray(rng, 3, 3);
        const auto map = match_template_nccoeff(img, t);
        for (int y = 0; y < map.height; ++y)
            for (int x = 0; x < map.width; ++x) {
                const double got = map.at(x, y);
                CHECK(got == doctest::Approx(test::brute_nccoeff(img, t, x, y)).epsilon(1e-6));
                CHECK(got >= -1.0);
                CHECK(got <= 1.0);
            }
    }
}

TEST_CASE("template larger than image throws") {
    CHECK_THROWS_AS(match_template_nccoeff(GrayImage(5, 5), GrayImage(6, 2)), std::invalid_argument);
}

TEST_CASE("best_match") {
    ResponseMap one{1, 1, {0.25}};
    CHECK(best_match(one).x == 0);
    CHECK(best_match(one).score == 0.25);

    ResponseMap planted{10, 6, std::vector<double>(60, 0.1)};
    planted.scores[3 * 10 + 7] = 0.9;
    const auto m = best_match(planted);
    CHECK(m.x == 7);
    CHECK(m.y == 3);

    ResponseMap flat{5, 4, std::vector<double>(20, 0.3)};
    CHECK(best_match(flat).x == 0);
    CHECK(best_match(flat).y == 0);

    ResponseMap ties{4, 3, std::vector<double>(12, 0.0)};
    ties.scores[6] = ties.scores[9] = 0.5;
    CHECK(best_match(ties).x == 2);
    CHECK(best_match(ties).y == 1);

    CHECK_THROWS_AS(best_match(ResponseMap{}), std::invalid_argument);
}

}
