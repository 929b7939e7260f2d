#include "qlat/linalg.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace qlat {

Vector random_vector(Eigen::Index n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double re = g(rng);
        const double im = g(rng);
        v(i) = {re, im};
    }
    return v;
}

namespace {

double dense_norm_exact(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::BDCSVD<Matrix> svd(m);
    return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
}

// Lanczos on C^dag C, tracking the largest Ritz value only. Returns a
// negative value on non-convergence.
template <class Apply, class ApplyAdj>
double top_singular_value(Apply apply, ApplyAdj apply_adj, Eigen::Index cols, const NormOptions& opts) {
    const int kmax = static_cast<int>(std::min<Eigen::Index>(cols, opts.max_iter));
    std::vector<Vector> basis;
    std::vector<double> alpha, beta;
    Vector v = random_vector(cols, opts.seed);
    v.normalize();
    for (int k = 0; k < kmax; ++k) {
        basis.push_back(v);
        Vector w = apply_adj(apply(v));
        alpha.push_back(std::real(v.dot(w)));
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) w -= b * b.dot(w);
        const double bnorm = w.norm();
        const int m = static_cast<int>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const double hi = std::max(0.0, es.eigenvalues()(m - 1));
        if (hi == 0.0 && bnorm == 0.0) return 0.0;
        const double res = bnorm * std::abs(es.eigenvectors()(m - 1, m - 1));
        if (bnorm <= opts.tol * hi || res <= opts.tol * hi || m == cols) return std::sqrt(hi);
        beta.push_back(bnorm);
        v = w / bnorm;
    }
    return -1.0;
}

}  // namespace

double spectral_norm(const Matrix& m, const NormOptions& opts) {
    const Eigen::Index n = std::max(m.rows(), m.cols());
    if (n == 0) return 0.0;
    if (n < opts.dense_below) return dense_norm_exact(m);
    if (m.cwiseAbs2().sum() == 0.0) return 0.0;
    const double s = top_singular_value([&](const Vector& v) -> Vector { return m * v; },
                                     [&](const Vector& v) -> Vector { return m.adjoint() * v; },
                                     m.cols(), opts);
    if (s >= 0.0) return s;
    if (n <= opts.fallback_cap) return dense_norm_exact(m);
    throw Error(ErrorKind::NonConvergence, "spectral_norm: Lanczos did not converge");
}

double spectral_norm(const SparseMatrix& m, const NormOptions& opts) {
    const Eigen::Index n = std::max(m.rows(), m.cols());
    if (n == 0 || m.nonZeros() == 0) return 0.0;
    if (n < opts.dense_below) return dense_norm_exact(Matrix(m));
    SparseMatrix adj = m.adjoint();
    const double s = top_singular_value([&](const Vector& v) -> Vector { return m * v; },
                                     [&](const Vector& v) -> Vector { return adj * v; },
                                     m.cols(), opts);
    if (s >= 0.0) return s;
    if (n <= opts.fallback_cap) return dense_norm_exact(Matrix(m));
    throw Error(ErrorKind::NonConvergence, "spectral_norm: Lanczos did not converge");
}

double normalized_hs_norm(const Matrix& m) {
    if (m.rows() == 0) return 0.0;
    return std::sqrt(m.cwiseAbs2().sum() / static_cast<double>(m.rows()));
}

double normalized_hs_norm(const SparseMatrix& m) {
    if (m.rows() == 0) return 0.0;
    return std::sqrt(m.squaredNorm() / static_cast<double>(m.rows()));
}

ExtremalEigen lanczos_extremal(const std::function<Vector(const Vector&)>& apply,
                               Eigen::Index dim, double tol, std::uint64_t seed, int max_dim) {
    ExtremalEigen out;
    if (dim == 0) return out;
    const int kmax = static_cast<int>(std::min<Eigen::Index>(dim, max_dim));
    std::vector<Vector> basis;
    basis.reserve(kmax);
    std::vector<double> alpha, beta;
    Vector v = random_vector(dim, seed);
    v.normalize();
    double last_hi = 0.0, last_lo = 0.0;
    for (int k = 0; k < kmax; ++k) {
        basis.push_back(v);
        Vector w = apply(v);
        const double a = std::real(v.dot(w));
        alpha.push_back(a);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) w -= b * b.dot(w);
        const double bnorm = w.norm();

        const int m = static_cast<int>(alpha.size());
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            t(i, i) = alpha[i];
            if (i + 1 < m) t(i, i + 1) = t(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
        const double hi = es.eigenvalues()(m - 1);
        const double lo = es.eigenvalues()(0);
        out.largest = hi;
        out.smallest = lo;
        out.iterations = m;
        const double scale = std::max({std::abs(hi), std::abs(lo), 1e-300});
        // Residual bound for the extreme Ritz pairs.
        const double res_hi = bnorm * std::abs(es.eigenvectors()(m - 1, m - 1));
        const double res_lo = bnorm * std::abs(es.eigenvectors()(m - 1, 0));
        if (bnorm <= tol * scale || (res_hi <= tol * scale && res_lo <= tol * scale && k > 2))
            return out;
        if (k > 2 && std::abs(hi - last_hi) <= tol * scale && std::abs(lo - last_lo) <= tol * scale &&
            res_hi <= std::sqrt(tol) * scale && res_lo <= std::sqrt(tol) * scale)
            return out;
        last_hi = hi;
        last_lo = lo;
        beta.push_back(bnorm);
        v = w / bnorm;
    }
    if (kmax == dim) return out;
    throw Error(ErrorKind::NonConvergence, "lanczos_extremal: not converged within " +
                                               std::to_string(kmax) + " vectors");
}

}  // namespace qlat
