#include <doctest.h>

#include <cmath>
#include <random>

#include "retina/kmeans.hpp"
#include "support.hpp"

using namespace retina;

TEST_SUITE("kmeans") {

TEST_CASE("k = 1 gives the mean") {
    std::mt19937_64 rng(40);
    const auto img = test::random_gray(rng, 9, 8);
    double mean = 0;
    for (auto v : img.data()) mean += v;
    mean /= static_cast<double>(img.size());
    double sse = 0;
    for (auto v : img.data()) sse += (v - mean) * (v - mean);
    const auto r = kmeans_intensity(img, 1);
    REQUIRE(r.k == 1);
    CHECK(r.centers[0] == doctest::Approx(mean));
    CHECK(r.objective == doctest::Approx(sse));
    CHECK(count_foreground(brightest_cluster_mask(r)) == img.size());
}

TEST_CASE("two intensity values") {
    GrayImage img(10, 10, 0);
    for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 3; ++x) img.at(x, y) = 200;
    const auto r = kmeans_intensity(img, 2);
    REQUIRE(r.k == 2);
    CHECK(r.centers[0] == 0.0);
    CHECK(r.centers[1] == 200.0);
    CHECK(r.objective == 0.0);
    const auto bright = brightest_cluster_mask(r);
    CHECK(count_foreground(bright) == 30);
    CHECK(bright.at(1, 4) == 1);
    CHECK(quantize(r) == img);
}

TEST_CASE("fewer distinct intensities than clusters") {
    GrayImage img(6, 6, 10);
    img.at(0, 0) = 90;
    const auto r = kmeans_intensity(img, 5);
    CHECK(r.requested_k == 5);
    CHECK(r.k == 2);
    CHECK(r.objective == 0.0);
    CHECK_THROWS_AS(kmeans_intensity(img, 0), std::invalid_argument);
}

TEST_CASE("brightest cluster of three") {
    GrayImage img(9, 3);
    for (int x = 0; x < 9; ++x)
        for (int y = 0; y < 3; ++y) img.at(x, y) = static_cast<std::uint8_t>(x < 3 ? 30 : x < 6 ? 90 : 190);
    const auto r = kmeans_intensity(img, 3);
    REQUIRE(r.centers == std::vector<double>{30, 90, 190});
    const auto m = brightest_cluster_mask(r);
    for (int y = 0; y < 3; ++y)
        for (int x = 0; x < 9; ++x) CHECK(m.at(x, y) == (x >= 6 ? 1 : 0));
}

TEST_CASE("k = 2 reaches the best threshold split") {
    std::mt19937_64 rng(41);
    for (int n = 0; n < 200; ++n) {
        const auto img = test::random_gray(rng, 6, 6);
        const auto r = kmeans_intensity(img, 2);
        CHECK(r.objective <= test::best_threshold_split_objective(img) * (1 + 1e-9) + 1e-9);
    }
}

TEST_CASE("objective history, nearest-centre labels and stated objective") {
    std::mt19937_64 rng(42);
    for (int n = 0; n < 100; ++n) {
        const auto img = test::random_gray(rng, 12, 10);
        const int k = 2 + n % 5;
        const auto r = kmeans_intensity(img, k);
        for (std::size_t i = 1; i < r.history.size(); ++i) CHECK(r.history[i] <= r.history[i - 1] + 1e-9);
        CHECK(r.objective == doctest::Approx(kmeans_objective(img, r.labels, r.centers)));
        double sse = 0;
        for (std::size_t i = 0; i < img.size(); ++i) {
            const double p = img.data()[i];
            const int lab = r.labels[i];
            REQUIRE(lab >= 0);
            REQUIRE(lab < r.k);
            sse += (r.centers[static_cast<std::size_t>(lab)] - p) * (r.centers[static_cast<std::size_t>(lab)] - p);
            for (int c = 0; c < r.k; ++c) {
                const double dc = std::abs(r.centers[static_cast<std::size_t>(c)] - p);
                const double dl = std::abs(r.centers[static_cast<std::size_t>(lab)] - p);
                CHECK(dl <= dc);
                if (c < lab) CHECK(dc > dl);
            }
        }
        CHECK(r.objective == doctest::Approx(sse));
        CHECK(std::is_sorted(r.centers.begin(), r.centers.end()));
    }
}

TEST_CASE("deterministic, with and without restarts") {
    std::mt19937_64 rng(43);
    const auto img = test::random_gray(rng, 30, 20);
    const auto a = kmeans_intensity(img, 4), b = kmeans_intensity(img, 4);
    CHECK(a.labels == b.labels);
    CHECK(a.centers == b.centers);
    KMeansOptions opt;
    opt.random_restarts = 5;
    opt.seed = 7;
    const auto c = kmeans_intensity(img, 4, opt), d = kmeans_intensity(img, 4, opt);
    CHECK(c.labels == d.labels);
    CHECK(c.objective <= a.objective + 1e-9);
}

TEST_CASE("quantize maps to rounded centres") {
    std::mt19937_64 rng(44);
    const auto img = test::random_gray(rng, 10, 10);
    const auto r = kmeans_intensity(img, 3);
    const auto q = quantize(r);
    for (std::size_t i = 0; i < img.size(); ++i)
        CHECK(q.data()[i] == std::lround(r.centers[static_cast<std::size_t>(r.labels[i])]));
}

TEST_CASE("colour k-means separates two colours") {
    RgbImage img(8, 8, Rgb{200, 40, 40});
    for (int x = 0; x < 8; ++x) img.at(x, 0) = img.at(x, 1) = Rgb{250, 250, 120};
    const auto r = kmeans_color(img, 2);
    REQUIRE(r.summary.k == 2);
    CHECK(r.summary.objective == doctest::Approx(0.0));
    CHECK(count_foreground(brightest_cluster_mask(r.summary)) == 16);
}

}
