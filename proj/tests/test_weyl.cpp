#include "doctest.h"

#include "oracles.hpp"
#include "qlat/weyl.hpp"

using namespace qlat;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("weyl matrices match explicit clock and shift powers") {
    for (int d : {2, 3, 5}) {
        oracle::Mat x = oracle::Mat::Zero(d, d), z = oracle::Mat::Zero(d, d);
        for (int s = 0; s < d; ++s) {
            x((s + 1) % d, s) = 1.0;
            z(s, s) = std::polar(1.0, 2.0 * std::acos(-1.0) * s / d);
        }
        for (const auto& r : all_weyl_indices(d)) {
            oracle::Mat u = oracle::eye(d);
            for (int i = 0; i < r.r1; ++i) u = u * x;
            for (int i = 0; i < r.r2; ++i) u = u * z;
            CHECK(max_diff(weyl_matrix(r), u) < 1e-14);
        }
    }
}

TEST_CASE("weyl product law holds for every pair") {
    for (int d : {2, 3, 4, 5}) {
        for (const auto& a : all_weyl_indices(d))
            for (const auto& b : all_weyl_indices(d)) {
                const PhasedWeyl p = weyl_product(PhasedWeyl(a), PhasedWeyl(b));
                CHECK(max_diff(weyl_matrix(p), weyl_matrix(a) * weyl_matrix(b)) < 1e-13);
            }
    }
}

TEST_CASE("commutation phase reproduces U_a U_b = w^c U_b U_a") {
    for (int d : {2, 3, 4}) {
        for (const auto& a : all_weyl_indices(d))
            for (const auto& b : all_weyl_indices(d)) {
                const int c = commutation_phase(a, b);
                CHECK(c >= 0);
                CHECK(c < d);
                const Matrix lhs = weyl_matrix(a) * weyl_matrix(b);
                const Matrix rhs = root_of_unity(c, d) * weyl_matrix(b) * weyl_matrix(a);
                CHECK(max_diff(lhs, rhs) < 1e-13);
            }
    }
}

TEST_CASE("clock and shift on a qutrit commute up to w^2") {
    // X Z = w^{-1} Z X with X|s> = |s+1>, Z|s> = w^s |s>.
    CHECK(commutation_phase({1, 0, 3}, {0, 1, 3}) == 2);
    CHECK(commutation_phase({0, 1, 3}, {1, 0, 3}) == 1);
}

TEST_CASE("weyl matrices are unitary and trace orthogonal") {
    const int d = 4;
    const auto idx = all_weyl_indices(d);
    REQUIRE(idx.size() == 16);
    for (const auto& a : idx) {
        const Matrix u = weyl_matrix(a);
        CHECK(max_diff(u * u.adjoint(), Matrix::Identity(d, d)) < 1e-14);
        for (const auto& b : idx) {
            const cplx t = (u.adjoint() * weyl_matrix(b)).trace();
            CHECK(std::abs(t - (a == b ? cplx(d) : cplx(0))) < 1e-13);
        }
    }
}

TEST_CASE("root of unity reduces large exponents") {
    CHECK(std::abs(root_of_unity(7 + 3 * 1000003, 3) - root_of_unity(1, 3)) < 1e-15);
    CHECK(std::abs(root_of_unity(-1, 4) - cplx(0, -1)) < 1e-15);
}

TEST_CASE("joint commutant of all nontrivial indices is trivial") {
    for (int d : {2, 3, 5}) {
        std::vector<WeylIndex> nontrivial;
        for (const auto& r : all_weyl_indices(d))
            if (!r.is_identity()) nontrivial.push_back(r);
        const auto c = joint_commutant_indices(nontrivial);
        REQUIRE(c.size() == 1);
        CHECK(c[0].is_identity());
        // A single X commutes with exactly the X powers.
        CHECK(joint_commutant_indices({WeylIndex(1, 0, d)}).size() == static_cast<std::size_t>(d));
    }
}

TEST_CASE("index arithmetic wraps mod d") {
    const WeylIndex a(2, 1, 3), b(2, 2, 3);
    CHECK(a + b == WeylIndex(1, 0, 3));
    CHECK(-a == WeylIndex(1, 2, 3));
    CHECK_THROWS(WeylIndex(0, 0, 1));
}
