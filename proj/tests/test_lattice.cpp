#include "doctest.h"

#include "oracles.hpp"
#include "qlat/hamiltonians.hpp"
#include "qlat/lattice.hpp"
#include "qlat/linalg.hpp"

using namespace qlat;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("embedding matches the Kronecker oracle") {
    for (int d : {2, 3}) {
        const ChainGeometry g(4, d);
        const Matrix a = oracle::random_matrix(d, 11 + d);
        for (int x = 0; x < 4; ++x) {
            const LatticeOperator op = embed_at(a, x, g);
            CHECK(max_diff(op.dense(), oracle::embed(a, x, 4, d)) < 1e-14);
            CHECK(op.support() == Support{x});
        }
        const Matrix pair = oracle::random_matrix(d * d, 21 + d);
        const LatticeOperator p = embed_sites(pair, std::vector<int>{1, 2}, g);
        CHECK(max_diff(p.dense(), oracle::embed_pair(pair, 1, 4, d)) < 1e-14);
        CHECK(p.support() == Support{1, 2});
    }
}

TEST_CASE("embedding on reversed sites swaps the tensor factors") {
    const ChainGeometry g(2, 2);
    const Matrix zx = kron(pauli_z(), pauli_x());
    const LatticeOperator fwd = embed_sites(zx, std::vector<int>{1, 0}, g);
    CHECK(max_diff(fwd.dense(), oracle::kron(pauli_x(), pauli_z())) < 1e-15);
}

TEST_CASE("shift translates supports and composes") {
    const ChainGeometry g(5, 3);
    const Matrix a = oracle::random_matrix(3, 5);
    const LatticeOperator a0 = embed_at(a, 0, g);
    for (int y = -6; y <= 6; ++y) {
        const LatticeOperator s = shift(a0, y);
        CHECK(max_diff(s.dense(), embed_at(a, g.wrap(y), g).dense()) < 1e-14);
        CHECK(s.support() == Support{g.wrap(y)});
    }
    const LatticeOperator b = embed_sites(oracle::random_matrix(9, 6), std::vector<int>{1, 3}, g);
    CHECK(max_diff(shift(shift(b, 1), 2).dense(), shift(b, 3).dense()) < 1e-14);
    CHECK(max_diff(shift(b, 5).dense(), b.dense()) < 1e-14);
}

TEST_CASE("shift on open chains rejects leaving the chain") {
    const ChainGeometry g(3, 2, Boundary::Open);
    const LatticeOperator a = embed_at(pauli_x(), 1, g);
    CHECK(shift(a, 1).support() == Support{2});
    CHECK_THROWS_AS(shift(a, 2), Error);
}

TEST_CASE("translation commutes with a periodic chain Hamiltonian") {
    const ChainGeometry g(5, 2);
    const LatticeOperator h = assemble(heisenberg(g));
    CHECK(max_diff(shift(h, 1).dense(), h.dense()) < 1e-13);
}

TEST_CASE("conditional expectation matches the partial-trace oracle") {
    for (int d : {2, 3}) {
        const int L = 3;
        const ChainGeometry g(L, d);
        const Matrix b = oracle::random_matrix(g.hilbert_dim(), 100 + d);
        for (int x = 0; x < L; ++x) {
            const Matrix e = conditional_expectation(b, x, g);
            CHECK(max_diff(e, oracle::conditional_expectation(b, x, L, d)) < 1e-13);
            const Matrix es = Matrix(conditional_expectation(SparseMatrix(b.sparseView()), x, g));
            CHECK(max_diff(es, e) < 1e-13);
            // Idempotent and trace preserving.
            CHECK(max_diff(conditional_expectation(e, x, g), e) < 1e-13);
            CHECK(std::abs(e.trace() - b.trace()) < 1e-11);
        }
    }
}

TEST_CASE("support residuals vanish off the support") {
    const ChainGeometry g(4, 2);
    const LatticeOperator op = embed_sites(oracle::random_matrix(4, 3), std::vector<int>{0, 2}, g);
    const auto r = support_residuals(op);
    CHECK(r[1] < 1e-14);
    CHECK(r[3] < 1e-14);
    CHECK(r[0] > 0.1);
    CHECK(r[2] > 0.1);
}

TEST_CASE("commutator norm is exactly zero on disjoint supports") {
    const ChainGeometry g(4, 2);
    const auto a = embed_at(oracle::random_hermitian(2, 1), 0, g);
    const auto b = embed_at(oracle::random_hermitian(2, 2), 2, g);
    CHECK(commutator_norm(a, b) == 0.0);
    // ||[X, Z]|| = ||-2iY|| = 2
    CHECK(commutator_norm(embed_at(pauli_x(), 1, g), embed_at(pauli_z(), 1, g)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("dense and sparse storage agree under arithmetic") {
    const ChainGeometry g(6, 2);
    const LatticeOperator a = embed_at(pauli_x(), 0, g);
    REQUIRE(a.is_sparse());
    const LatticeOperator ad(g, a.dense());
    const LatticeOperator b(g, oracle::random_matrix(64, 4));
    REQUIRE(!b.is_sparse());
    CHECK(max_diff((a * b).dense(), (ad * b).dense()) < 1e-13);
    CHECK(max_diff((b * a).dense(), (b * ad).dense()) < 1e-13);
    CHECK(max_diff((a + b).dense(), (ad + b).dense()) < 1e-13);
    CHECK(std::abs(a.trace()) < 1e-15);
    CHECK(a.hs_norm() == doctest::Approx(1.0));
}

TEST_CASE("spectral norm agrees with a full SVD") {
    NormOptions opts;
    for (Eigen::Index n : {5, 40, 300, 520}) {
        const Matrix m = oracle::random_matrix(n, 7 + n);
        const double ref = Eigen::BDCSVD<Matrix>(m).singularValues()(0);
        CHECK(spectral_norm(m, opts) == doctest::Approx(ref).epsilon(1e-9));
    }
    // Degenerate top singular value: a unitary.
    const Matrix q = Eigen::HouseholderQR<Matrix>(oracle::random_matrix(400, 9)).householderQ();
    CHECK(spectral_norm(q, opts) == doctest::Approx(1.0).epsilon(1e-9));
    const ChainGeometry g(9, 2);
    const SparseMatrix s = embed_at(2.5 * pauli_z(), 3, g).sparse();
    CHECK(spectral_norm(s, opts) == doctest::Approx(2.5).epsilon(1e-9));
}

TEST_CASE("normalized HS norm of the identity is one") {
    const ChainGeometry g(3, 3);
    CHECK(LatticeOperator::identity(g).hs_norm() == doctest::Approx(1.0));
    CHECK(normalized_hs_norm(Matrix(Matrix::Identity(7, 7))) == doctest::Approx(1.0));
}

TEST_CASE("lanczos extremal eigenvalues match a dense solve") {
    const Matrix h = oracle::random_hermitian(120, 31);
    const Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const auto r = lanczos_extremal([&](const Vector& v) { return Vector(h * v); }, 120);
    CHECK(r.largest == doctest::Approx(es.eigenvalues()(119)).epsilon(1e-9));
    CHECK(r.smallest == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-9));
}

TEST_CASE("geometry validation") {
    CHECK_THROWS_AS(ChainGeometry(0, 2), Error);
    CHECK_THROWS_AS(ChainGeometry(2, 1), Error);
    CHECK(boundary_from_string("open") == Boundary::Open);
    CHECK_THROWS_AS(boundary_from_string("twisted"), Error);
    const ChainGeometry g(4, 2);
    CHECK(g.wrap(-1) == 3);
    CHECK(g.wrap(9) == 1);
}
