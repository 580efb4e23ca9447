#include <random>

#include "doctest.h"
#include "nucleus/error.hpp"
#include "nucleus/variants.hpp"
#include "oracles.hpp"

using namespace nucleus;

namespace {

LatticeParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.8, 1.2);
    return {u(rng), u(rng), u(rng)};
}

bool near(const Mat3& a, const Mat3& b, double tol) { return norm(a - b) <= tol; }

}  // namespace

TEST_CASE("degenerate stretches give six identities") {
    const VariantSet vs = make_variants({1, 1, 1});
    for (int i = 1; i <= 6; ++i) CHECK(vs.variant(i) == Mat3::identity());
    CHECK(variants_coincide(vs));
    CHECK(is_untransformed({1, 1, 1}));
}

TEST_CASE("matrix layout at the test parameters") {
    const VariantSet vs = make_variants({1.06, 0.92, 1.02});
    CHECK(std::abs(vs.variant(1)(1, 2) - 0.02) < 1e-15);
    CHECK(std::abs(vs.variant(2)(1, 2) + 0.02) < 1e-15);
    CHECK(vs.variant(1)(0, 0) == 0.92);
    CHECK(vs.variant(3)(1, 1) == 0.92);
    CHECK(vs.variant(5)(2, 2) == 0.92);
    CHECK(std::abs(vs.variant(3)(0, 2) - 0.02) < 1e-15);
    CHECK(std::abs(vs.variant(6)(0, 1) + 0.02) < 1e-15);
    CHECK(std::abs(vs.variant(1)(1, 1) - 1.04) < 1e-15);
    CHECK_FALSE(variants_coincide(vs));
}

TEST_CASE("determinant and norm are the same for every variant") {
    std::mt19937_64 rng(21);
    for (int k = 0; k < 1000; ++k) {
        const LatticeParams p = random_params(rng);
        const VariantSet vs = make_variants(p);
        for (int i = 1; i <= 6; ++i) {
            CHECK(std::abs(det(vs.variant(i)) - p.det()) < 1e-12);
            CHECK(std::abs(norm_sq(vs.variant(i)) - p.norm_sq()) < 1e-12);
            CHECK(is_symmetric(vs.variant(i), 0.0));
        }
    }
}

TEST_CASE("variant set is closed under cubic conjugation") {
    std::mt19937_64 rng(22);
    for (int k = 0; k < 200; ++k) {
        const VariantSet vs = make_variants(random_params(rng));
        for (const Mat3& r : cubic_rotations()) {
            for (int i = 1; i <= 6; ++i) {
                const Mat3 c = r * vs.variant(i) * transpose(r);
                double best = INFINITY;
                for (int j = 1; j <= 6; ++j) best = std::min(best, norm(c - vs.variant(j)));
                CHECK(best < 1e-12);
            }
        }
    }
}

TEST_CASE("cubic rotations form a group of 24 distinct proper rotations") {
    const auto& g = cubic_rotations();
    for (std::size_t a = 0; a < g.size(); ++a) {
        CHECK(is_rotation(g[a], 0.0));
        for (std::size_t b = a + 1; b < g.size(); ++b) CHECK(norm(g[a] - g[b]) > 0.5);
        for (std::size_t b = 0; b < g.size(); ++b) {
            const Mat3 prod = g[a] * g[b];
            CHECK(std::any_of(g.begin(), g.end(), [&](const Mat3& r) { return near(r, prod, 1e-15); }));
        }
    }
}

TEST_CASE("invalid stretches and indices") {
    for (const LatticeParams p : {LatticeParams{0, 1, 1}, LatticeParams{1, -1, 1}, LatticeParams{1, 1, NAN}}) {
        try {
            make_variants(p);
            FAIL("expected InvalidParams");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::InvalidParams);
        }
    }
    const VariantSet vs = make_variants({1.06, 0.92, 1.02});
    for (int s : {0, 7, -1}) {
        try {
            vs.variant(s);
            FAIL("expected RangeError");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::RangeError);
        }
    }
}

TEST_CASE("well projection") {
    const VariantSet vs = make_variants({1.06, 0.92, 1.02});
    CHECK(well_projection(Mat3::identity(), vs, 1e-8) == WellTag::austenite());
    std::mt19937_64 rng(23);
    for (int k = 0; k < 200; ++k) {
        const Mat3 r = oracle::random_rotation(rng);
        CHECK(well_projection(r * vs.variant(3), vs, 1e-8) == WellTag::martensite(3));
        CHECK(well_projection(r, vs, 1e-8) == WellTag::austenite());
    }
    CHECK(well_projection(1.5 * Mat3::identity(), vs, 1e-8) == WellTag::off_well());
    try {
        well_projection(Mat3::diag(1, 1, -1), vs, 1e-8);
        FAIL("expected Singular");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Singular);
    }
}

TEST_CASE("well distances agree with a brute-force rotation search") {
    // for M = R0 U_i + E the distance is at most |E|, and no sampled rotation beats it
    const VariantSet vs = make_variants({1.06, 0.92, 1.02});
    std::mt19937_64 rng(24);
    for (int k = 0; k < 100; ++k) {
        const Mat3 r0 = oracle::random_rotation(rng);
        const Mat3 e = 1e-3 * oracle::random_matrix(rng);
        const auto d = well_distances(r0 * vs.variant(4) + e, vs);
        CHECK(d[4] <= norm(e) + 1e-14);
        // no rotation does better than the reported distance
        for (int t = 0; t < 50; ++t) {
            const Mat3 r = oracle::random_rotation(rng);
            CHECK(norm(r0 * vs.variant(4) + e - r * vs.variant(4)) >= d[4] - 1e-14);
        }
    }
    const auto d = well_distances(1.5 * Mat3::identity(), vs);
    CHECK(d[0] == doctest::Approx(std::sqrt(3.0) * 0.5));
}
