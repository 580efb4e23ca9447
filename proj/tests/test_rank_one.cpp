#include <random>

#include "doctest.h"
#include "nucleus/error.hpp"
#include "nucleus/rank_one.hpp"
#include "oracles.hpp"

using namespace nucleus;

namespace {

const LatticeParams kTest{1.06, 0.92, 1.02};

void check_solution(const Mat3& F, const Mat3& G, const TwinSolution& t) {
    CHECK(twin_residual(F, G, t) <= 1e-10);
    CHECK(is_rotation(t.Q, 1e-10));
    CHECK(std::abs(norm(t.n) - 1.0) < 1e-12);
    // first nonzero component of n is positive
    for (std::size_t k = 0; k < 3; ++k) {
        if (std::abs(t.n[k]) > 1e-12) {
            CHECK(t.n[k] > 0.0);
            break;
        }
    }
}

}  // namespace

TEST_CASE("identical wells are degenerate") {
    try {
        twin_candidates(Mat3::identity(), Mat3::identity(), 1e-8);
        FAIL("expected Degenerate");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Degenerate);
    }
    try {
        twin_table(make_variants({1, 1, 1}));
        FAIL("expected Degenerate");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Degenerate);
    }
}

TEST_CASE("no solution when the middle eigenvalue is not one") {
    CHECK(solve_twin(Mat3::identity(), Mat3::diag(2, 2, 0.5)).empty());
}

TEST_CASE("singular wells are rejected") {
    try {
        solve_twin(Mat3::identity(), Mat3::diag(1, 1, 0));
        FAIL("expected Singular");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::Singular);
    }
}

TEST_CASE("U_1 / U_2 twins have normals along e_2 and e_3") {
    const VariantSet vs = make_variants(kTest);
    const auto sols = solve_twin(vs.variant(1), vs.variant(2));
    REQUIRE(sols.size() == 2);
    std::vector<Vec3> normals;
    for (const auto& t : sols) {
        check_solution(vs.variant(1), vs.variant(2), t);
        normals.push_back(t.n);
    }
    const bool e2_e3 = (norm(cross(normals[0], {0, 1, 0})) < 1e-10 && norm(cross(normals[1], {0, 0, 1})) < 1e-10) ||
                       (norm(cross(normals[0], {0, 0, 1})) < 1e-10 && norm(cross(normals[1], {0, 1, 0})) < 1e-10);
    CHECK(e2_e3);

    // the grid-search oracle finds the same two rotations
    const auto rots = oracle::twin_rotations(vs.variant(1), vs.variant(2));
    REQUIRE(rots.size() == 2);
    for (const auto& t : sols) {
        double best = INFINITY;
        for (const auto& r : rots) best = std::min(best, norm(r - t.Q));
        CHECK(best < 1e-6);
    }
}

TEST_CASE("every ordered pair at the test parameters has two twins") {
    const VariantSet vs = make_variants(kTest);
    const TwinTable table = twin_table(vs);
    CHECK(table.size() == 30);
    for (const auto& [pair, sols] : table) {
        CAPTURE(pair.first);
        CAPTURE(pair.second);
        CHECK(pair.first != pair.second);
        // oracle: middle eigenvalue of C from the Jacobi solver
        const Mat3 Fi = inverse(vs.variant(pair.first));
        const Mat3 C = transpose(Fi) * vs.variant(pair.second) * vs.variant(pair.second) * Fi;
        CHECK(std::abs(oracle::jacobi(C).values[1] - 1.0) < 1e-12);
        REQUIRE(sols.size() == 2);
        for (const auto& t : sols) check_solution(vs.variant(pair.first), vs.variant(pair.second), t);
        CHECK(sols[0].branch != sols[1].branch);
    }
}

TEST_CASE("twins from random compatible pairs") {
    // G = R (F + a (x) n) is compatible with F by construction
    std::mt19937_64 rng(31);
    int solved = 0;
    for (int k = 0; k < 1000; ++k) {
        const Mat3 F = Mat3::identity() + 0.1 * oracle::random_matrix(rng);
        if (det(F) <= 0.2) continue;
        const Vec3 a = 0.2 * oracle::random_unit(rng), n = oracle::random_unit(rng);
        const Mat3 R = oracle::random_rotation(rng);
        const Mat3 G = R * (F + outer(a, n));
        if (det(G) <= 0.2) continue;
        const auto sols = solve_twin(F, G, {1e-8, 1e-9});
        REQUIRE(sols.size() == 2);
        ++solved;
        // one of them recovers the construction: Q = R^T, a (x) n
        double best = INFINITY;
        for (const auto& t : sols) {
            CHECK(twin_residual(F, G, t) <= 1e-9);
            best = std::min(best, norm(outer(t.a, t.n) + F - transpose(R) * G));
        }
        CHECK(best < 1e-9);
    }
    CHECK(solved > 900);
}

TEST_CASE("twin equation is covariant under swapping the wells") {
    // Q U_j - U_i = a (x) n  <=>  Q^T U_i - U_j = -Q^T a (x) n
    const VariantSet vs = make_variants(kTest);
    const TwinTable table = twin_table(vs);
    for (const auto& [pair, sols] : table) {
        const auto& back = table.at({pair.second, pair.first});
        for (const auto& t : sols) {
            double best = INFINITY;
            for (const auto& u : back) best = std::min(best, norm(u.Q - transpose(t.Q)));
            CHECK(best < 1e-10);
        }
    }
}

TEST_CASE("non-twinnable parameters give empty pairs") {
    // oracle: middle eigenvalue of C away from 1 means no solution
    const VariantSet vs = make_variants({1.1, 0.9, 1.0});
    const TwinTable table = twin_table(vs);
    for (const auto& [pair, sols] : table) {
        const Mat3 Fi = inverse(vs.variant(pair.first));
        const Mat3 C = transpose(Fi) * vs.variant(pair.second) * vs.variant(pair.second) * Fi;
        const double mid = oracle::jacobi(C).values[1];
        if (std::abs(mid - 1.0) > 1e-6) CHECK(sols.empty());
        else CHECK(sols.size() == 2);
    }
}
