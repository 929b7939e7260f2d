#include "qlat/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace qlat {

const char* to_string(PropagatorMethod m) {
    switch (m) {
    case PropagatorMethod::Auto: return "auto";
    case PropagatorMethod::Exact: return "exact";
    case PropagatorMethod::Krylov: return "krylov";
    }
    return "auto";
}

PropagatorMethod propagator_method_from_string(const std::string& s) {
    if (s == "auto") return PropagatorMethod::Auto;
    if (s == "exact") return PropagatorMethod::Exact;
    if (s == "krylov") return PropagatorMethod::Krylov;
    fail("unknown propagator method '" + s + "' (expected auto|exact|krylov)");
}

Propagator::Propagator(LatticeOperator h, PropagatorOptions opts, std::vector<double> grid)
    : h_(std::move(h)), opts_(opts), grid_(std::move(grid)) {
    if (hermiticity_defect(h_) > 1e-10) fail("Propagator: Hamiltonian is not self-adjoint");
    method_ = opts_.method;
    if (method_ == PropagatorMethod::Auto)
        method_ = h_.dim() > opts_.krylov_threshold ? PropagatorMethod::Krylov : PropagatorMethod::Exact;
    if (method_ == PropagatorMethod::Exact) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h_.dense());
        if (es.info() != Eigen::Success)
            throw Error(ErrorKind::NonConvergence, "Propagator: eigendecomposition failed");
        energies_ = es.eigenvalues();
        eigenvectors_ = es.eigenvectors();
    }
}

const RealVector& Propagator::energies() const {
    require(method_ == PropagatorMethod::Exact, "Propagator::energies: exact method only");
    return energies_;
}

const Matrix& Propagator::eigenvectors() const {
    require(method_ == PropagatorMethod::Exact, "Propagator::eigenvectors: exact method only");
    return eigenvectors_;
}

Matrix Propagator::unitary(double t) const {
    require(method_ == PropagatorMethod::Exact, "Propagator::unitary: exact method only");
    Vector phases(energies_.size());
    for (Eigen::Index i = 0; i < energies_.size(); ++i) phases(i) = std::exp(cplx(0.0, energies_(i) * t));
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

Matrix Propagator::evolve_matrix(const Matrix& a, double t, KrylovStats* stats) const {
    if (t == 0.0) return a;
    if (method_ == PropagatorMethod::Exact) {
        const Matrix u = unitary(t);
        return u * a * u.adjoint();
    }
    return krylov_evolve(a, t, stats);
}

// Lanczos on the superoperator B -> [H, B] with the Frobenius inner product;
// each step approximates e^{i s ad_H} B in the Krylov space and is accepted
// once the standard a-posteriori error bound drops below krylov_tol.
Matrix Propagator::krylov_evolve(const Matrix& a, double t, KrylovStats* stats) const {
    const double total = std::abs(t);
    const double sign = t < 0 ? -1.0 : 1.0;
    double remaining = total;
    double dt = total;
    Matrix cur = a;
    const int kmax = std::max(4, opts_.krylov_max_dim);
    KrylovStats local;
    while (remaining > 0.0) {
        const double step = std::min(dt, remaining);
        const double beta0 = cur.norm();
        if (beta0 == 0.0) break;
        std::vector<Matrix> basis;
        std::vector<double> alpha, beta;
        basis.push_back(cur / beta0);
        bool accepted = false;
        Eigen::VectorXcd coeffs;
        double residual = 0.0;
        for (int k = 0; k < kmax; ++k) {
            Matrix w = h_.left_apply(basis[k]) - h_.right_apply(basis[k]);
            const double ak = std::real((basis[k].conjugate().cwiseProduct(w)).sum());
            alpha.push_back(ak);
            w -= ak * basis[k];
            if (k > 0) w -= beta[k - 1] * basis[k - 1];
            // one pass of full reorthogonalization
            for (const auto& v : basis) w -= v * (v.conjugate().cwiseProduct(w)).sum();
            const double bk = w.norm();

            const int m = k + 1;
            Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
            for (int i = 0; i < m; ++i) {
                tri(i, i) = alpha[i];
                if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
            const Eigen::MatrixXd& q = es.eigenvectors();
            Eigen::VectorXcd y(m);
            for (int i = 0; i < m; ++i) {
                cplx s = 0.0;
                for (int j = 0; j < m; ++j) s += q(i, j) * std::exp(cplx(0.0, sign * step * es.eigenvalues()(j))) * q(0, j);
                y(i) = s;
            }
            residual = bk * std::abs(y(m - 1));
            const bool invariant = bk <= 1e-14 * std::max(1.0, std::abs(ak));
            if (invariant || residual <= opts_.krylov_tol) {
                coeffs = y;
                accepted = true;
                break;
            }
            beta.push_back(bk);
            basis.push_back(w / bk);
        }
        if (!accepted) {
            dt = step / 2.0;
            if (dt < 1e-12 * std::max(1.0, total))
                throw Error(ErrorKind::NonConvergence,
                            "Krylov propagation did not converge (residual " + std::to_string(residual) + ")");
            continue;
        }
        Matrix next = Matrix::Zero(cur.rows(), cur.cols());
        for (Eigen::Index i = 0; i < coeffs.size(); ++i) next += coeffs(i) * basis[i];
        cur = beta0 * next;
        remaining -= step;
        ++local.steps;
        local.max_subspace = std::max<int>(local.max_subspace, static_cast<int>(coeffs.size()));
        local.max_residual = std::max(local.max_residual, residual);
    }
    if (stats) *stats = local;
    return cur;
}

LatticeOperator Propagator::evolve_operator(const LatticeOperator& a, double t) const {
    require(a.geometry() == h_.geometry(), "evolve_operator: geometry mismatch");
    if (t == 0.0) return a;
    return LatticeOperator(a.geometry(), evolve_matrix(a.dense(), t));
}

GnsVector Propagator::evolve(const GnsVector& v, double t) const { return GnsVector(evolve_operator(v.payload(), t)); }

DoubledOperator Propagator::evolve_doubled(const DoubledOperator& s, double t) const {
    require(s.geometry() == h_.geometry(), "evolve_doubled: geometry mismatch");
    auto self = std::make_shared<const Propagator>(*this);
    return DoubledOperator::function(
        s.geometry(),
        [self, s, t](const Matrix& b) { return self->evolve_matrix(s.apply(self->evolve_matrix(b, -t)), t); },
        "tau_" + std::to_string(t) + "(" + s.describe() + ")");
}

// ---------------------------------------------------------------------------

LightConeScan light_cone_scan(const Propagator& p, const LatticeOperator& a, const LatticeOperator& b,
                              const std::vector<int>& xs, const std::vector<double>& ts, const NormOptions& norm) {
    const auto& g = p.hamiltonian().geometry();
    require(a.geometry() == g && b.geometry() == g, "light_cone_scan: geometry mismatch");
    require(g.sites >= 4, "light_cone_scan: chain too short (need at least 4 sites)");
    for (int x : xs)
        require(x >= 0 && x < g.sites, "light_cone_scan: separation " + std::to_string(x) + " exceeds the chain");
    LightConeScan scan{xs, ts, {}};
    std::vector<LatticeOperator> shifted;
    shifted.reserve(xs.size());
    for (int x : xs) shifted.push_back(shift(a, x));
    for (double t : ts) {
        std::vector<double> row;
        row.reserve(xs.size());
        for (const auto& op : shifted) row.push_back(commutator_norm(p.evolve_operator(op, t), b, norm));
        scan.values.push_back(std::move(row));
    }
    return scan;
}

namespace {

void check_uniform(const std::vector<double>& ts) {
    require(!ts.empty(), "cesaro_mean: empty time grid");
    if (ts.size() < 3) return;
    const double h = ts[1] - ts[0];
    require(h > 0.0, "cesaro_mean: time grid must be increasing");
    for (std::size_t i = 2; i < ts.size(); ++i)
        require(std::abs((ts[i] - ts[i - 1]) - h) <= 1e-9 * std::max(1.0, std::abs(h)),
                "cesaro_mean: time grid is not uniform");
}

template <class T>
std::vector<T> running_mean(const std::vector<double>& ts, const std::vector<T>& f) {
    check_uniform(ts);
    require(ts.size() == f.size(), "cesaro_mean: series and grid differ in length");
    std::vector<T> out(f.size());
    out[0] = f[0];
    T integral{};
    for (std::size_t i = 1; i < f.size(); ++i) {
        integral += 0.5 * (ts[i] - ts[i - 1]) * (f[i] + f[i - 1]);
        out[i] = integral / (ts[i] - ts[0]);
    }
    return out;
}

}  // namespace

CesaroResult cesaro_mean(const std::vector<double>& ts, const std::vector<double>& f) {
    CesaroResult r;
    r.running = running_mean(ts, f);
    r.final_value = r.running.back();
    return r;
}

std::vector<cplx> cesaro_mean_complex(const std::vector<double>& ts, const std::vector<cplx>& f) {
    return running_mean(ts, f);
}

std::vector<double> projector_leakage(const Propagator& p, int x, const GnsVector& v, const std::vector<double>& ts) {
    const auto& g = p.hamiltonian().geometry();
    require(v.geometry() == g, "projector_leakage: geometry mismatch");
    require(x >= 0 && x < g.sites, "projector_leakage: site out of range");
    const Matrix b = v.payload().dense();
    std::vector<double> out;
    out.reserve(ts.size());
    for (double t : ts) {
        const Matrix back = p.evolve_matrix(b, -t);
        const Matrix w = p.evolve_matrix(conditional_expectation(back, x, g), t);
        out.push_back(normalized_hs_norm(Matrix(w - conditional_expectation(w, x, g))));
    }
    return out;
}

double spectrum_distance(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(), "spectrum_distance: size mismatch");
    const bool herm = (a - a.adjoint()).cwiseAbs().maxCoeff() < 1e-12 && (b - b.adjoint()).cwiseAbs().maxCoeff() < 1e-12;
    if (herm) {
        const RealVector ea = Eigen::SelfAdjointEigenSolver<Matrix>(a, Eigen::EigenvaluesOnly).eigenvalues();
        const RealVector eb = Eigen::SelfAdjointEigenSolver<Matrix>(b, Eigen::EigenvaluesOnly).eigenvalues();
        return (ea - eb).cwiseAbs().maxCoeff();
    }
    auto sorted = [](const Matrix& m) {
        Eigen::ComplexEigenSolver<Matrix> es(m, false);
        std::vector<cplx> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        std::sort(v.begin(), v.end(), [](cplx x, cplx y) {
            if (std::abs(x.real() - y.real()) > 1e-9) return x.real() < y.real();
            return x.imag() < y.imag();
        });
        return v;
    };
    const auto va = sorted(a), vb = sorted(b);
    double m = 0.0;
    for (std::size_t i = 0; i < va.size(); ++i) m = std::max(m, std::abs(va[i] - vb[i]));
    return m;
}

}  // namespace qlat
