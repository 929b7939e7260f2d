#include "qlat/spectra.hpp"

#include <algorithm>
#include <cmath>

namespace qlat {

namespace {

constexpr double kClusterTol = 1e-8;

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

cplx mean_factor(double w, double T) {
    if (std::abs(w) < kZeroFrequencyTol) return 1.0;
    const double x = w * T;
    return (std::exp(cplx(0.0, x)) - 1.0) / cplx(0.0, x);
}

// c_ij = rho~_ji a~_ij / D in the eigenbasis of H.
Matrix bohr_coefficients(const Propagator& p, const Matrix& rho, const Matrix& a) {
    const Matrix& v = p.eigenvectors();
    const Matrix rt = v.adjoint() * rho * v;
    const Matrix at = v.adjoint() * a * v;
    return rt.transpose().cwiseProduct(at) / static_cast<double>(rho.rows());
}

}  // namespace

double mean_spacing_ratio(const std::vector<double>& sorted_levels) {
    std::vector<double> lv;
    for (double e : sorted_levels)
        if (lv.empty() || e - lv.back() > kClusterTol) lv.push_back(e);
    if (lv.size() < 3) return 0.0;
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 1; i + 1 < lv.size(); ++i) {
        const double s0 = lv[i] - lv[i - 1], s1 = lv[i + 1] - lv[i];
        sum += std::min(s0, s1) / std::max(s0, s1);
        ++n;
    }
    return sum / n;
}

SpectrumReport generator_spectrum(const HamiltonianSpec& spec, const std::vector<LabeledOperator>& probes,
                                  std::int64_t cap) {
    const LatticeOperator h = assemble(spec);
    const Eigen::Index D = h.dim();
    if (D * D > cap)
        throw Error(ErrorKind::SizeCap, "generator_spectrum: doubled dimension " + std::to_string(D * D) +
                                            " exceeds the dense cap " + std::to_string(cap));
    const Matrix hat = adjoint_generator(h).to_matrix(cap);
    Eigen::SelfAdjointEigenSolver<Matrix> es(hat);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, "generator_spectrum: eigen-solve failed");
    const RealVector& lam = es.eigenvalues();

    SpectrumReport rep;
    rep.eigenvalues.assign(lam.data(), lam.data() + lam.size());
    std::vector<std::pair<Eigen::Index, Eigen::Index>> ranges;  // [begin, end) per level
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        if (ranges.empty() || lam(i) - lam(ranges.back().second - 1) > kClusterTol) {
            ranges.emplace_back(i, i + 1);
            rep.levels.push_back(lam(i));
        } else {
            ranges.back().second = i + 1;
        }
    }
    for (const auto& [b, e] : ranges) rep.multiplicities.push_back(static_cast<int>(e - b));
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (std::abs(lam(i)) < kZeroFrequencyTol) ++rep.zero_dim;

    const RealVector energies = Eigen::SelfAdjointEigenSolver<Matrix>(h.dense(), Eigen::EigenvaluesOnly).eigenvalues();
    std::vector<double> diffs;
    diffs.reserve(D * D);
    for (Eigen::Index i = 0; i < D; ++i)
        for (Eigen::Index j = 0; j < D; ++j) diffs.push_back(energies(i) - energies(j));
    std::sort(diffs.begin(), diffs.end());
    const auto n = rep.eigenvalues.size();
    for (std::size_t i = 0; i < n; ++i) {
        rep.difference_set_error = std::max(rep.difference_set_error, std::abs(diffs[i] - rep.eigenvalues[i]));
        rep.negation_asymmetry = std::max(rep.negation_asymmetry, std::abs(rep.eigenvalues[i] + rep.eigenvalues[n - 1 - i]));
    }
    rep.mean_spacing_ratio = mean_spacing_ratio(std::vector<double>(energies.data(), energies.data() + D));

    const Matrix& q = es.eigenvectors();
    for (const auto& pr : probes) {
        require(pr.op.geometry() == spec.geometry, "generator_spectrum: probe geometry mismatch");
        const Vector v = vec(pr.op.dense());
        const double n2 = v.squaredNorm();
        require(n2 > 0.0, "generator_spectrum: zero probe '" + pr.label + "'");
        const Vector coeff = q.adjoint() * v;
        OverlapProfile prof;
        prof.label = pr.label;
        for (const auto& [b, e] : ranges) {
            const double w = coeff.segment(b, e - b).squaredNorm() / n2;
            prof.weights.push_back(w);
            if (std::abs(lam(b)) < kZeroFrequencyTol) prof.zero_overlap += w;
        }
        rep.overlaps.push_back(std::move(prof));
    }
    return rep;
}

Matrix zero_eigenspace(const LatticeOperator& h, std::int64_t cap) {
    const Matrix hat = adjoint_generator(h).to_matrix(cap);
    Eigen::SelfAdjointEigenSolver<Matrix> es(hat);
    if (es.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, "zero_eigenspace: eigen-solve failed");
    std::vector<Eigen::Index> idx;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i)) < kZeroFrequencyTol) idx.push_back(i);
    Matrix basis(hat.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) basis.col(k) = es.eigenvectors().col(idx[k]);
    return basis;
}

Matrix perturbed_density(const LatticeOperator& b) {
    const Matrix bd = b.dense();
    const Matrix rho = bd * bd.adjoint();
    const double w = std::real(rho.trace()) / static_cast<double>(rho.rows());
    require(w > 0.0, "perturbed_density: perturbation annihilates Omega");
    return rho / w;
}

cplx spectral_cesaro_mean(const Propagator& p, const Matrix& rho, const Matrix& a, double T) {
    require(T > 0.0, "spectral_cesaro_mean: horizon must be positive");
    const RealVector& e = p.energies();
    const Matrix c = bohr_coefficients(p, rho, a);
    cplx s = 0.0;
    for (Eigen::Index j = 0; j < c.cols(); ++j)
        for (Eigen::Index i = 0; i < c.rows(); ++i) s += c(i, j) * mean_factor(e(i) - e(j), T);
    return s;
}

cplx bohr_limit(const Propagator& p, const Matrix& rho, const Matrix& a) {
    const RealVector& e = p.energies();
    const Matrix c = bohr_coefficients(p, rho, a);
    cplx s = 0.0;
    for (Eigen::Index j = 0; j < c.cols(); ++j)
        for (Eigen::Index i = 0; i < c.rows(); ++i)
            if (std::abs(e(i) - e(j)) < kZeroFrequencyTol) s += c(i, j);
    return s;
}

cplx zero_space_compression(const Matrix& basis, const Matrix& rho, const Matrix& a) {
    const Vector va = vec(a.adjoint());
    const Vector vr = vec(rho);
    return va.dot(basis * (basis.adjoint() * vr)) / static_cast<double>(rho.rows());
}

EquilibriumReport return_to_equilibrium(const HamiltonianSpec& spec, const LatticeOperator& perturbation,
                                        const LatticeOperator& a, const std::vector<double>& ts) {
    const auto& g = spec.geometry;
    require(perturbation.geometry() == g && a.geometry() == g, "return_to_equilibrium: geometry mismatch");
    require(!ts.empty() && ts.front() == 0.0, "return_to_equilibrium: time grid must start at 0");
    PropagatorOptions popts;
    popts.method = PropagatorMethod::Exact;
    const Propagator p(assemble(spec), popts);
    const Matrix rho = perturbed_density(perturbation);
    const Matrix ad = a.dense();
    const double D = static_cast<double>(g.hilbert_dim());

    EquilibriumReport rep;
    rep.ts = ts;
    for (double t : ts) rep.series.push_back((rho * p.evolve_matrix(ad, t)).trace() / D);
    rep.running = cesaro_mean_complex(ts, rep.series);
    rep.tracial = a.normalized_trace();
    rep.limit = bohr_limit(p, rho, ad);
    rep.offset = std::abs(rep.running.back() - rep.tracial);
    rep.limit_offset = std::abs(rep.limit - rep.tracial);

    const RealVector& e = p.energies();
    const Matrix c = bohr_coefficients(p, rho, ad);
    const double T = ts.back();
    double min_gap = 0.0;
    for (Eigen::Index j = 0; j < c.cols(); ++j)
        for (Eigen::Index i = 0; i < c.rows(); ++i) {
            const double w = std::abs(e(i) - e(j));
            if (w < kZeroFrequencyTol) continue;
            if (min_gap == 0.0 || w < min_gap) min_gap = w;
            if (T > 0.0) rep.band += std::abs(c(i, j)) * 2.0 / (w * T);
        }
    rep.horizon = min_gap > 0.0 ? 1.0 / min_gap : 0.0;

    // Translation average of a on the periodic version of the chain.
    ChainGeometry pg = g;
    pg.boundary = Boundary::Periodic;
    const LatticeOperator ap(pg, ad);
    Matrix abar = Matrix::Zero(ad.rows(), ad.cols());
    for (int y = 0; y < g.sites; ++y) abar += shift(ap, y).dense();
    abar /= static_cast<double>(g.sites);
    rep.floor = std::abs(bohr_limit(p, rho, abar) - rep.tracial) + rep.band;
    return rep;
}

}  // namespace qlat
