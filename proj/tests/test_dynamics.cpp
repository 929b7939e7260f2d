#include "doctest.h"

#include "oracles.hpp"
#include "qlat/dynamics.hpp"
#include "qlat/hamiltonians.hpp"

using namespace qlat;

namespace {

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

PropagatorOptions method(PropagatorMethod m) {
    PropagatorOptions o;
    o.method = m;
    o.krylov_tol = 1e-12;
    return o;
}

}  // namespace

TEST_CASE("two-site heisenberg autocorrelation is cos^2(4t)") {
    // H = 2 (XX + YY + ZZ) = 4 SWAP - 2, so tau_t(X_0) = c^2 X_0 + s^2 X_1 + i s c [SWAP, X_0]
    // with c = cos 4t, s = sin 4t, and omega(X_0 tau_t(X_0)) = cos^2 4t.
    const ChainGeometry g(2, 2);
    const LatticeOperator h = assemble(heisenberg(g));
    const LatticeOperator x0 = embed_at(pauli_x(), 0, g);
    for (auto m : {PropagatorMethod::Exact, PropagatorMethod::Krylov}) {
        const Propagator p(h, method(m));
        for (double t : {0.0, 0.1, 0.37, 1.0, 2.5}) {
            const Matrix xt = p.evolve_matrix(x0.dense(), t);
            const cplx overlap = (x0.dense() * xt).trace() / 4.0;
            CHECK(std::abs(overlap - std::pow(std::cos(4.0 * t), 2)) < 1e-10);
            CHECK(max_diff(xt, oracle::heisenberg_evolve(h.dense(), x0.dense(), t)) < 1e-9);
        }
    }
}

TEST_CASE("exact and Krylov propagators agree on L=6") {
    const ChainGeometry g(6, 2);
    const LatticeOperator h = assemble(heisenberg(g));
    const Propagator pe(h, method(PropagatorMethod::Exact)), pk(h, method(PropagatorMethod::Krylov));
    const LatticeOperator a = embed_sites(oracle::random_hermitian(4, 3), std::vector<int>{2, 3}, g);
    KrylovStats stats;
    for (double t : {0.3, 1.7}) {
        const Matrix ae = pe.evolve_matrix(a.dense(), t);
        const Matrix ak = pk.evolve_matrix(a.dense(), t, &stats);
        CHECK(max_diff(ae, ak) < 1e-8);
        CHECK(spectrum_distance(ae, a.dense()) < 1e-9);
    }
    CHECK(stats.steps > 0);
    CHECK(pk.method() == PropagatorMethod::Krylov);
}

TEST_CASE("auto switches by dimension") {
    PropagatorOptions o;
    o.krylov_threshold = 16;
    CHECK(Propagator(assemble(heisenberg(ChainGeometry(4, 2))), o).method() == PropagatorMethod::Exact);
    CHECK(Propagator(assemble(heisenberg(ChainGeometry(5, 2))), o).method() == PropagatorMethod::Krylov);
    CHECK(propagator_method_from_string("krylov") == PropagatorMethod::Krylov);
    CHECK_THROWS_AS(propagator_method_from_string("rk4"), Error);
}

TEST_CASE("exact propagator is a unitary group") {
    const ChainGeometry g(4, 2);
    const Propagator p(assemble(xy_model(g)), method(PropagatorMethod::Exact));
    const Matrix id = Matrix::Identity(16, 16);
    for (double t : {0.2, 1.3}) {
        const Matrix u = p.unitary(t);
        CHECK(max_diff(u * u.adjoint(), id) < 1e-12);
        CHECK(max_diff(p.unitary(0.5 * t) * p.unitary(0.5 * t), u) < 1e-12);
        CHECK(max_diff(u, oracle::expm(cplx(0, 1) * t * p.hamiltonian().dense())) < 1e-10);
    }
}

TEST_CASE("evolved GNS vectors keep their norm") {
    const ChainGeometry g(3, 3);
    const Propagator p(assemble(exchange_model(0, 1, g)));
    const GnsVector v(LatticeOperator(g, oracle::random_matrix(27, 8)));
    const GnsVector vt = p.evolve(v, 0.9);
    CHECK(vt.norm() == doctest::Approx(v.norm()).epsilon(1e-12));
    CHECK(p.evolve(GnsVector::omega(g), 0.9).payload().dense().isApprox(Matrix::Identity(27, 27), 1e-12));
}

TEST_CASE("light cone scan starts at zero and spreads") {
    const ChainGeometry g(6, 2);
    const Propagator p(assemble(heisenberg(g)));
    const LatticeOperator x0 = embed_at(pauli_x(), 0, g);
    const auto scan = light_cone_scan(p, x0, x0, {1, 2, 3}, {0.0, 0.5});
    for (double v : scan.values[0]) CHECK(v == 0.0);
    CHECK(scan.values[1][0] > scan.values[1][2]);
    CHECK(scan.values[1][0] > 0.5);
}

TEST_CASE("emch radin evolution of Z stays diagonal") {
    const ChainGeometry g(5, 2);
    const Propagator p(assemble(emch_radin(g)));
    const LatticeOperator z0 = embed_at(pauli_z(), 0, g);
    const Matrix zt = p.evolve_matrix(z0.dense(), 3.3);
    CHECK(max_diff(zt, z0.dense()) < 1e-12);
}

TEST_CASE("cesaro mean of known integrands") {
    std::vector<double> ts, ones, cosines;
    for (int i = 0; i <= 4000; ++i) {
        ts.push_back(0.005 * i);
        ones.push_back(1.0);
        cosines.push_back(std::cos(ts.back()));
    }
    CHECK(cesaro_mean(ts, ones).final_value == doctest::Approx(1.0));
    const double T = ts.back();
    CHECK(cesaro_mean(ts, cosines).final_value == doctest::Approx(std::sin(T) / T).epsilon(1e-6));
    CHECK(cesaro_mean(ts, cosines).running.front() == 1.0);
    std::vector<cplx> phase;
    for (double t : ts) phase.push_back(std::polar(1.0, t));
    const cplx m = cesaro_mean_complex(ts, phase).back();
    CHECK(std::abs(m - (std::polar(1.0, T) - 1.0) / (cplx(0, 1) * T)) < 1e-6);
}

TEST_CASE("projector leakage separates coupled from on-site dynamics") {
    const ChainGeometry g(6, 2);
    std::vector<double> ts;
    for (int i = 0; i <= 8; ++i) ts.push_back(0.25 * i);
    const GnsVector v(embed_at(pauli_x(), 1, g));
    const auto coupled = projector_leakage(Propagator(assemble(heisenberg(g))), 0, v, ts);
    const auto onsite = projector_leakage(Propagator(assemble(onsite_model(pauli_z(), g))), 0, v, ts);
    CHECK(coupled[0] < 1e-14);
    CHECK(*std::max_element(coupled.begin(), coupled.end()) > 0.1);
    CHECK(*std::max_element(onsite.begin(), onsite.end()) < 1e-12);
}

TEST_CASE("projector leakage at t = 0.25 matches the doubled-space oracle") {
    // ||(1 - P) W P W^dag v|| from explicit 4^L matrices on L = 3.
    const int L = 3;
    const ChainGeometry g(L, 2);
    const LatticeOperator h = assemble(heisenberg(g));
    const GnsVector v(embed_at(pauli_x(), 1, g));
    const double t = 0.25;
    const auto got = projector_leakage(Propagator(h), 0, v, {t});
    const oracle::Mat P = oracle::twirl_projector(0, L, 2);
    const oracle::Mat W = oracle::expm(cplx(0, 1) * t * oracle::adjoint_generator(h.dense()));
    const Eigen::VectorXcd w =
        (oracle::eye(64) - P) * W * P * W.adjoint() * oracle::vec(v.payload().dense());
    CHECK(got[0] == doctest::Approx(w.norm() / std::sqrt(8.0)).epsilon(1e-9));
}
