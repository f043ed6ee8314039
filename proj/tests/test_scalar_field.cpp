#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "ksal/scalar_field.hpp"
#include "oracles.hpp"

using ksal::RgbImage;
using ksal::ScalarField;

TEST_CASE("construction and element access") {
    ScalarField f(4, 3, 0.25);
    CHECK(f.width() == 4);
    CHECK(f.height() == 3);
    CHECK(f.size() == 12);
    CHECK_FALSE(f.empty());
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] == 0.25);

    f.at(2, 1) = 0.75;
    CHECK(f[f.index(2, 1)] == 0.75);
    CHECK(f.index(2, 1) == 1 * 4 + 2);  // row-major

    ScalarField empty;
    CHECK(empty.empty());
    CHECK(empty.size() == 0);

    CHECK_THROWS_AS(ScalarField(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(ScalarField(3, -1), std::invalid_argument);
}

TEST_CASE("minmax, sum, all_finite, same_dims") {
    ScalarField f(3, 2);
    double vals[] = {0.5, -1.0, 2.0, 0.0, 1.5, 0.25};
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = vals[i];

    auto [lo, hi] = f.minmax();
    CHECK(lo == -1.0);
    CHECK(hi == 2.0);
    CHECK(f.sum() == doctest::Approx(3.25).epsilon(1e-15));
    CHECK(f.all_finite());

    f[3] = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(f.all_finite());
    f[3] = std::numeric_limits<double>::infinity();
    CHECK_FALSE(f.all_finite());

    CHECK(ScalarField(3, 2).same_dims(f));
    CHECK_FALSE(ScalarField(2, 3).same_dims(f));

    auto [elo, ehi] = ScalarField().minmax();
    CHECK(elo == 0.0);
    CHECK(ehi == 0.0);
}

TEST_CASE("resize_bilinear reproduces the input at identical dims") {
    oracle::Rng rng(11);
    ScalarField f = oracle::random_field(rng, 13, 9);
    ScalarField same = ksal::resize_bilinear(f, 13, 9);
    REQUIRE(same.same_dims(f));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(same[i] == f[i]);
}

TEST_CASE("resize_bilinear keeps constants exactly constant") {
    ScalarField f(7, 5, 0.37);
    for (auto [nw, nh] : {std::pair{14, 10}, {3, 2}, {20, 4}, {1, 1}}) {
        ScalarField r = ksal::resize_bilinear(f, nw, nh);
        REQUIRE(r.width() == nw);
        REQUIRE(r.height() == nh);
        for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == 0.37);
    }
}

TEST_CASE("resize_bilinear matches the direct per-pixel evaluation") {
    oracle::Rng rng(23);
    for (auto [w, h, nw, nh] : {std::array{16, 12, 8, 6},
                                {8, 6, 16, 12},
                                {10, 7, 13, 11},
                                {5, 9, 20, 3},
                                {1, 6, 4, 4}}) {
        ScalarField f = oracle::random_field(rng, w, h);
        ScalarField got = ksal::resize_bilinear(f, nw, nh);
        ScalarField want = oracle::resize_naive(f, nw, nh);
        REQUIRE(got.same_dims(want));
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-13));
    }
}

TEST_CASE("resize_bilinear validates target dims") {
    ScalarField f(4, 4);
    CHECK_THROWS_AS(ksal::resize_bilinear(f, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(ksal::resize_bilinear(f, 4, -2), std::invalid_argument);
}

TEST_CASE("RgbImage resize agrees with per-plane ScalarField resize") {
    oracle::Rng rng(31);
    RgbImage img = oracle::random_image(rng, 9, 7);

    ScalarField planes[3] = {ScalarField(9, 7), ScalarField(9, 7), ScalarField(9, 7)};
    for (int y = 0; y < 7; ++y)
        for (int x = 0; x < 9; ++x) {
            ksal::Rgb px = img.at(x, y);
            planes[0].at(x, y) = px.r;
            planes[1].at(x, y) = px.g;
            planes[2].at(x, y) = px.b;
        }

    RgbImage resized = ksal::resize_bilinear(img, 14, 5);
    for (int c = 0; c < 3; ++c) {
        ScalarField want = ksal::resize_bilinear(planes[c], 14, 5);
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 14; ++x) {
                ksal::Rgb px = resized.at(x, y);
                double got = c == 0 ? px.r : c == 1 ? px.g : px.b;
                CHECK(got == doctest::Approx(want.at(x, y)).epsilon(1e-13));
            }
    }
}

TEST_CASE("normalize_minmax maps the range onto [0,1]") {
    oracle::Rng rng(47);
    ScalarField f = oracle::random_field(rng, 11, 8, -3.0, 5.0);
    ScalarField n = ksal::normalize_minmax(f);

    auto [lo, hi] = n.minmax();
    CHECK(lo == 0.0);
    CHECK(hi == 1.0);

    auto [flo, fhi] = f.minmax();
    for (std::size_t i = 0; i < f.size(); ++i)
        CHECK(n[i] == doctest::Approx((f[i] - flo) / (fhi - flo)).epsilon(1e-14));
}

TEST_CASE("normalize_minmax flattens constants to zero") {
    ScalarField f(6, 4, 2.5);
    ScalarField n = ksal::normalize_minmax(f);
    for (std::size_t i = 0; i < n.size(); ++i) CHECK(n[i] == 0.0);
}

TEST_CASE("normalize_minmax is invariant under positive affine maps") {
    oracle::Rng rng(59);
    ScalarField f = oracle::random_field(rng, 10, 10);
    ScalarField g(10, 10);
    for (std::size_t i = 0; i < f.size(); ++i) g[i] = 3.25 * f[i] - 1.75;

    ScalarField nf = ksal::normalize_minmax(f);
    ScalarField ng = ksal::normalize_minmax(g);
    for (std::size_t i = 0; i < nf.size(); ++i)
        CHECK(ng[i] == doctest::Approx(nf[i]).epsilon(1e-12));
}
