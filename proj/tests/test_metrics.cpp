#include "doctest.h"

#include "mlvedit/metrics.hpp"
#include "mlvedit/rng.hpp"

using namespace mlv;

TEST_CASE("adjacent frame jump hand values and guards") {
    LatentSequence z(3, 2, 0.0);
    z.at(1, 0) = 3.0; // squared diffs at pair (0,1): 9 and 0, mean 4.5
    z.at(1, 1) = 0.0;
    CHECK(adjacent_frame_jump(z, 1) == doctest::Approx(4.5).epsilon(1e-12));
    CHECK(adjacent_frame_jump(z, 2) == doctest::Approx(4.5).epsilon(1e-12));
    CHECK_THROWS_AS(adjacent_frame_jump(z, 0), OutOfRangeError);
    CHECK_THROWS_AS(adjacent_frame_jump(z, 3), OutOfRangeError);
}

TEST_CASE("constant latents have zero roughness") {
    LatentSequence z(53, 4, 2.75);
    auto plan = plan_segments(53, 21, 5);
    auto report = boundary_jump(z, plan);
    CHECK(report.per_boundary.size() == 2);
    for (double v : report.per_boundary) CHECK(v == 0.0);
    CHECK(report.boundary_mean == 0.0);
    CHECK(report.interior_mean == 0.0);
}

TEST_CASE("a unit step lands in the boundary bucket") {
    auto plan = plan_segments(53, 21, 5);
    LatentSequence z(53, 1, 0.0);
    // spans are [0,21) [16,37) [32,53); boundaries sit at frames 16 and 32
    for (std::size_t f = 16; f < 53; ++f) z.at(f, 0) = 1.0;
    auto report = boundary_jump(z, plan);
    REQUIRE(report.per_boundary.size() == 2);
    CHECK(report.per_boundary[0] == 1.0);
    CHECK(report.per_boundary[1] == 0.0);
    CHECK(report.boundary_mean == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(report.interior_mean == 0.0);
}

TEST_CASE("roughness ignores a constant offset") {
    auto plan = plan_segments(50, 21, 5);
    auto z = sample_noise(SeedSpec{71, "fixture", 0}, 50, 4);
    auto shifted = z;
    for (double& v : shifted.flat()) v += 10.0;
    auto a = boundary_jump(z, plan);
    auto b = boundary_jump(shifted, plan);
    REQUIRE(a.per_boundary.size() == b.per_boundary.size());
    for (std::size_t i = 0; i < a.per_boundary.size(); ++i) {
        CHECK(b.per_boundary[i] == doctest::Approx(a.per_boundary[i]).epsilon(1e-9));
    }
    CHECK(b.interior_mean == doctest::Approx(a.interior_mean).epsilon(1e-9));
}

TEST_CASE("single-segment plans have no boundaries") {
    auto plan = plan_segments(21, 21, 5);
    LatentSequence z(21, 2, 1.0);
    z.at(10, 0) = 5.0;
    auto report = boundary_jump(z, plan);
    CHECK(report.per_boundary.empty());
    CHECK(report.boundary_mean == 0.0);
    CHECK(report.interior_mean > 0.0);

    Matrix features(21, 3, 1.0);
    auto fs = frame_skip_similarity(features, plan);
    CHECK(fs.per_pair.empty());
    CHECK(fs.mean == 1.0);
}

TEST_CASE("plan and latent sizes must agree") {
    auto plan = plan_segments(53, 21, 5);
    LatentSequence z(50, 4, 0.0);
    CHECK_THROWS_AS(boundary_jump(z, plan), InvalidShapeError);
    Matrix features(50, 3, 1.0);
    CHECK_THROWS_AS(frame_skip_similarity(features, plan), InvalidShapeError);
}

TEST_CASE("identical features give similarity one") {
    auto plan = plan_segments(53, 21, 5);
    Matrix features(53, 4);
    for (std::size_t f = 0; f < 53; ++f) {
        for (std::size_t j = 0; j < 4; ++j) {
            features.at(f, j) = 0.5 + static_cast<double>(j);
        }
    }
    auto report = frame_skip_similarity(features, plan);
    REQUIRE(report.per_pair.size() == 2);
    for (double v : report.per_pair) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(report.mean == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("orthogonal center features give similarity zero") {
    auto plan = plan_segments(53, 21, 5);
    // centers are frames 10, 26, 42: give each its own basis direction
    Matrix features(53, 3, 0.0);
    for (std::size_t f = 0; f < 53; ++f) features.at(f, 0) = 1.0;
    features.at(26, 0) = 0.0;
    features.at(26, 1) = 2.0;
    auto report = frame_skip_similarity(features, plan);
    REQUIRE(report.per_pair.size() == 2);
    CHECK(report.per_pair[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(report.per_pair[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(report.mean == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("cosine similarity is scale invariant") {
    auto plan = plan_segments(53, 21, 5);
    Matrix features(53, 6);
    auto noise = sample_noise(SeedSpec{72, "fixture", 0}, 53, 6);
    for (std::size_t f = 0; f < 53; ++f) {
        for (std::size_t j = 0; j < 6; ++j) features.at(f, j) = noise.at(f, j);
    }
    auto base = frame_skip_similarity(features, plan);
    Matrix scaled = features;
    for (double& v : scaled.data) v *= 37.5;
    auto big = frame_skip_similarity(scaled, plan);
    for (std::size_t i = 0; i < base.per_pair.size(); ++i) {
        CHECK(big.per_pair[i] == doctest::Approx(base.per_pair[i]).epsilon(1e-12));
    }
    for (double v : base.per_pair) {
        CHECK(v >= -1.0 - 1e-12);
        CHECK(v <= 1.0 + 1e-12);
    }
}

TEST_CASE("zero feature vectors are a domain error") {
    auto plan = plan_segments(53, 21, 5);
    Matrix features(53, 3, 1.0);
    for (std::size_t j = 0; j < 3; ++j) features.at(10, j) = 0.0; // a center
    CHECK_THROWS_AS(frame_skip_similarity(features, plan), NumericDomainError);
}

TEST_CASE("temporal slice of a constant channel is mid-gray") {
    LatentSequence z(40, 2, -3.25);
    auto slice = temporal_slice(z, 1);
    REQUIRE(slice.values.size() == 40);
    for (double v : slice.values) CHECK(v == -3.25);
    for (auto p : slice.pixels) CHECK(p == 128);
}

TEST_CASE("temporal slice spreads a ramp over the full range") {
    LatentSequence z(256, 1);
    for (std::size_t f = 0; f < 256; ++f) z.at(f, 0) = static_cast<double>(f);
    auto slice = temporal_slice(z, 0);
    CHECK(slice.pixels.front() == 0);
    CHECK(slice.pixels.back() == 255);
    for (std::size_t f = 0; f < 256; ++f) {
        CHECK(slice.pixels[f] == static_cast<std::uint8_t>(f));
        CHECK(slice.values[f] == static_cast<double>(f));
    }
}

TEST_CASE("temporal slice rejects a bad channel") {
    LatentSequence z(5, 2, 0.0);
    CHECK_THROWS_AS(temporal_slice(z, 2), OutOfRangeError);
}
