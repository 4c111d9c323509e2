#include <doctest.h>

#include <cmath>
#include <random>

#include "retina/contours.hpp"
#include "retina/pipelines.hpp"
#include "retina/template_match.hpp"
#include "support.hpp"

using namespace retina;

namespace {

RgbImage disc_on_flat(int w, int h, Point c, int r, std::uint8_t bg, std::uint8_t fg) {
    GrayImage g(w, h, bg);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if ((x - c.x) * (x - c.x) + (y - c.y) * (y - c.y) <= r * r) g.at(x, y) = fg;
    return test::gray_to_rgb(g);
}

bool no_foreground_within(const BinaryMask& m, Point c, double r) {
    for (int y = 0; y < m.height(); ++y)
        for (int x = 0; x < m.width(); ++x)
            if (m.at(x, y) && std::hypot(x - c.x, y - c.y) <= r) return false;
    return true;
}

}  // namespace

TEST_SUITE("pipelines") {

TEST_CASE("vessels: constant image gives an empty mask of the same size") {
    const RgbImage img(90, 70, Rgb{120, 80, 40});
    const auto m = segment_vessels(img);
    CHECK(m.width() == 90);
    CHECK(m.height() == 70);
    CHECK(count_foreground(m) == 0);
}

TEST_CASE("vessels: dark 3 px strokes are recovered") {
    std::mt19937_64 rng(60);
    for (int n = 0; n < 3; ++n) {
        const auto scene = test::stroke_scene(rng, 256, 256, 6, 3.0);
        const auto m = segment_vessels(scene.image);
        const double recall = static_cast<double>(count_foreground(logical_and(m, scene.strokes))) /
                              static_cast<double>(count_foreground(scene.strokes));
        CAPTURE(recall);
        CHECK(recall >= 0.80);
    }
}

TEST_CASE("vessels: deterministic") {
    std::mt19937_64 rng(61);
    const auto scene = test::stroke_scene(rng, 128, 96, 4, 3.0);
    CHECK(segment_vessels(scene.image) == segment_vessels(scene.image));
}

TEST_CASE("optic disc: planted bright disc") {
    const auto img = disc_on_flat(300, 300, {210, 96}, 22, 40, 230);
    const auto od = locate_optic_disc(img);
    CHECK(std::hypot(od.center.x - 210, od.center.y - 96) <= 5.0);
    CHECK(od.center_full == od.center);
    CHECK(od.radius == doctest::Approx(22.0));
    CHECK(od.score <= 1.0);
}

TEST_CASE("optic disc: padded template") {
    const auto tmpl = generate_disc_template();
    GrayImage g(300, 300, 0);
    for (int y = 0; y < 51; ++y)
        for (int x = 0; x < 51; ++x) g.at(120 + x, 40 + y) = tmpl.at(x, y);
    const auto od = locate_optic_disc(test::gray_to_rgb(g));
    CHECK(od.center == Point{120 + 25, 40 + 25});
    CHECK(od.score == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("optic disc: centre maps into the original bounds") {
    std::mt19937_64 rng(62);
    std::uniform_int_distribution<int> size(60, 700);
    for (int n = 0; n < 12; ++n) {
        const int w = size(rng), h = size(rng);
        std::uniform_int_distribution<int> d(0, 255);
        RgbImage img(w, h);
        for (auto& p : img.data()) p = Rgb{static_cast<std::uint8_t>(d(rng)), 0, static_cast<std::uint8_t>(d(rng))};
        const auto od = locate_optic_disc(img);
        CHECK(img.contains(od.center_full.x, od.center_full.y));
        CHECK(od.score >= -1.0);
        CHECK(od.score <= 1.0);
    }
}

TEST_CASE("optic disc: full-resolution mapping") {
    // An ellipse that the anisotropic resize turns into a radius-22 disc.
    GrayImage g(900, 600, 40);
    for (int y = 0; y < 600; ++y)
        for (int x = 0; x < 900; ++x)
            if (std::pow((x - 630) / 66.0, 2) + std::pow((y - 192) / 44.0, 2) <= 1.0) g.at(x, y) = 230;
    const auto img = test::gray_to_rgb(g);
    const auto od = locate_optic_disc(img);
    CHECK(std::hypot(od.center_full.x - 630, od.center_full.y - 192) <= 10.0);
    CHECK(od.radius == doctest::Approx(22.0 * 0.5 * (3.0 + 2.0)));
}

TEST_CASE("mask_optic_disc") {
    OdLocation od;
    od.center_full = {50, 40};
    od.radius = 10;
    SUBCASE("foreground far away is untouched") {
        BinaryMask m(100, 80);
        for (int x = 80; x < 95; ++x) m.at(x, 70) = 1;
        CHECK(mask_optic_disc(m, od, 1.5) == m);
    }
    SUBCASE("a disc inside the radius is erased") {
        BinaryMask m(100, 80);
        for (int y = 0; y < 80; ++y)
            for (int x = 0; x < 100; ++x)
                if (std::hypot(x - 50, y - 40) <= 12) m.at(x, y) = 1;
        CHECK(count_foreground(mask_optic_disc(m, od, 1.5)) == 0);
    }
    SUBCASE("erased count equals the lattice oracle") {
        const BinaryMask full(100, 80, 1);
        const auto out = mask_optic_disc(full, od, 1.5);
        CHECK(full.size() - count_foreground(out) == test::lattice_disc_count(100, 80, 50, 40, 15.0));
        const auto g = mask_optic_disc(GrayImage(100, 80, 9), od, 2.0);
        std::size_t zeros = 0;
        for (auto v : g.data()) zeros += v == 0;
        CHECK(zeros == test::lattice_disc_count(100, 80, 50, 40, 20.0));
    }
    SUBCASE("scale below 1 throws") { CHECK_THROWS_AS(mask_optic_disc(BinaryMask(4, 4), od, 0.5), std::invalid_argument); }
}

TEST_CASE("exudates: constant image gives nothing") {
    const RgbImage img(120, 100, Rgb{90, 60, 30});
    const auto m = detect_exudates(img);
    CHECK(m.width() == 120);
    CHECK(count_foreground(m) == 0);
}

TEST_CASE("exudates: small bright blobs kept, disc cleared") {
    std::mt19937_64 rng(63);
    for (int n = 0; n < 4; ++n) {
        const auto scene = test::exudate_scene(rng, 600, 10);
        const auto st = detect_exudates_stages(scene.image);
        CHECK(std::hypot(st.od.center_full.x - scene.od_center.x, st.od.center_full.y - scene.od_center.y) <= 6.0);
        CHECK(no_foreground_within(st.result, st.od.center_full, st.od.radius * 1.5));
        CHECK(no_foreground_within(st.result, scene.od_center, scene.od_radius));

        const auto labels = label_components(scene.blobs);
        std::vector<std::size_t> hit(labels.sizes.size(), 0);
        for (std::size_t i = 0; i < scene.blobs.size(); ++i)
            if (labels.labels[i] > 0 && st.result.data()[i]) ++hit[static_cast<std::size_t>(labels.labels[i] - 1)];
        int retained = 0;
        for (std::size_t b = 0; b < hit.size(); ++b) retained += 2 * hit[b] >= labels.sizes[b];
        CHECK(labels.sizes.size() == 10);
        CHECK(retained >= 9);
    }
}

TEST_CASE("exudates: structure area scales with image area") {
    PipelineConfig cfg;
    CHECK(scaled_structure_area(cfg, 4288, 2848) == doctest::Approx(3000.0));
    CHECK(scaled_structure_area(cfg, 2144, 1424) == doctest::Approx(750.0));
}

TEST_CASE("config validation") {
    PipelineConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    cfg.median_k = 4;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.od_working_size = {40, 40};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.od_mask_scale = 0.9;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.asf_schedule = {{6, 5}};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

}
