#pragma once

// Brute-force reference constructions. Everything here is built from plain
// Kronecker products and dense Eigen decompositions so that it shares no code
// path with the library beyond the Matrix typedefs.

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace oracle {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat kron(const Mat& a, const Mat& b) { return Eigen::kroneckerProduct(a, b).eval(); }

inline Mat eye(Eigen::Index n) { return Mat::Identity(n, n); }

inline Mat ipow_dim(int d, int k) { return eye(static_cast<Eigen::Index>(std::pow(d, k))); }

// op on site x of an L-site chain, site 0 most significant.
inline Mat embed(const Mat& op, int x, int L, int d) {
    Mat out = eye(1);
    for (int s = 0; s < L; ++s) out = kron(out, s == x ? op : eye(d));
    return out;
}

// Two-site op on (x, x + 1), x + 1 < L.
inline Mat embed_pair(const Mat& op, int x, int L, int d) {
    Mat out = eye(1);
    for (int s = 0; s < L; ++s) {
        if (s == x) {
            out = kron(out, op);
            ++s;
        } else {
            out = kron(out, eye(d));
        }
    }
    return out;
}

inline Mat sx() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}
inline Mat sy() {
    Mat m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}
inline Mat sz() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

// sum over bonds of XX + YY + ZZ, including (L-1, 0) when periodic.
inline Mat heisenberg(int L, bool periodic) {
    const Eigen::Index D = Eigen::Index(1) << L;
    Mat h = Mat::Zero(D, D);
    const int nb = periodic ? L : L - 1;
    for (int x = 0; x < nb; ++x) {
        const int y = (x + 1) % L;
        for (const Mat& p : {sx(), sy(), sz()}) h += embed(p, x, L, 2) * embed(p, y, L, 2);
    }
    return h;
}

// Column-major vectorization: vec(A B C) = (C^T (x) A) vec(B).
inline Mat left_super(const Mat& a) { return kron(eye(a.rows()), a); }
inline Mat right_super(const Mat& b) { return kron(b.transpose(), eye(b.rows())); }
inline Mat adjoint_generator(const Mat& h) { return left_super(h) - right_super(h); }

inline Eigen::VectorXcd vec(const Mat& b) { return Eigen::Map<const Eigen::VectorXcd>(b.data(), b.size()); }
inline Mat unvec(const Eigen::VectorXcd& v, Eigen::Index n) { return Eigen::Map<const Mat>(v.data(), n, n); }

// Twirl over the d^2 clock-shift unitaries at site x: the conditional
// expectation as a superoperator.
inline Mat twirl_projector(int x, int L, int d) {
    Mat shift = Mat::Zero(d, d), clock = Mat::Zero(d, d);
    const double pi = std::acos(-1.0);
    for (int s = 0; s < d; ++s) {
        shift((s + 1) % d, s) = 1.0;
        clock(s, s) = std::polar(1.0, 2.0 * pi * s / d);
    }
    const Eigen::Index D = static_cast<Eigen::Index>(std::pow(d, L));
    Mat p = Mat::Zero(D * D, D * D);
    Mat xa = eye(d);
    for (int a = 0; a < d; ++a) {
        Mat zb = eye(d);
        for (int b = 0; b < d; ++b) {
            const Mat u = embed(xa * zb, x, L, d);
            p += kron(u.conjugate(), u);
            zb = zb * clock;
        }
        xa = xa * shift;
    }
    return p / double(d * d);
}

// Partial trace over site x, then re-tensored with 1/d at x.
inline Mat conditional_expectation(const Mat& b, int x, int L, int d) {
    const Eigen::Index left = static_cast<Eigen::Index>(std::pow(d, x));
    const Eigen::Index right = static_cast<Eigen::Index>(std::pow(d, L - x - 1));
    Mat reduced = Mat::Zero(left * right, left * right);
    for (Eigen::Index l1 = 0; l1 < left; ++l1)
        for (Eigen::Index r1 = 0; r1 < right; ++r1)
            for (Eigen::Index l2 = 0; l2 < left; ++l2)
                for (Eigen::Index r2 = 0; r2 < right; ++r2) {
                    cplx acc = 0.0;
                    for (int s = 0; s < d; ++s)
                        acc += b((l1 * d + s) * right + r1, (l2 * d + s) * right + r2);
                    reduced(l1 * right + r1, l2 * right + r2) = acc;
                }
    Mat out = Mat::Zero(b.rows(), b.cols());
    for (Eigen::Index l1 = 0; l1 < left; ++l1)
        for (Eigen::Index r1 = 0; r1 < right; ++r1)
            for (Eigen::Index l2 = 0; l2 < left; ++l2)
                for (Eigen::Index r2 = 0; r2 < right; ++r2)
                    for (int s = 0; s < d; ++s)
                        out((l1 * d + s) * right + r1, (l2 * d + s) * right + r2) =
                            reduced(l1 * right + r1, l2 * right + r2) / double(d);
    return out;
}

inline Mat expm(const Mat& m) { return m.exp(); }

// tau_t(A) = e^{iHt} A e^{-iHt} via the matrix exponential.
inline Mat heisenberg_evolve(const Mat& h, const Mat& a, double t) {
    const Mat u = expm(cplx(0, 1) * t * h);
    return u * a * u.adjoint();
}

inline double opnorm(const Mat& m) { return Eigen::JacobiSVD<Mat>(m).singularValues()(0); }

inline Mat random_matrix(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    Mat m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = cplx(nd(rng), nd(rng));
    return m;
}

inline Mat random_hermitian(Eigen::Index n, std::uint64_t seed) {
    const Mat m = random_matrix(n, seed);
    return (m + m.adjoint()) / 2.0;
}

}  // namespace oracle
