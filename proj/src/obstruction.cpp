#include "qlat/obstruction.hpp"

#include <algorithm>
#include <cmath>

namespace qlat {

const char* to_string(Coupling c) { return c == Coupling::OnSiteOnly ? "on-site-only" : "coupled"; }

namespace {

struct SiteSplit {
    Eigen::Index lo = 1;      // stride of site x
    Eigen::Index blocks = 1;  // number of high-order index blocks
    Eigen::Index rest = 1;    // d^{L-1}

    Eigen::Index chain_index(Eigen::Index rest_index, int digit, int d) const {
        const Eigen::Index hi = rest_index / lo;
        const Eigen::Index l = rest_index % lo;
        return (hi * d + digit) * lo + l;
    }
};

SiteSplit split_at(const ChainGeometry& g, int x) {
    SiteSplit s;
    for (int k = x + 1; k < g.sites; ++k) s.lo *= g.dim;
    s.rest = g.hilbert_dim() / g.dim;
    s.blocks = s.rest / s.lo;
    return s;
}

}  // namespace

BlockDecomposition decompose_blocks(const LatticeOperator& h, int x) {
    const auto& g = h.geometry();
    require(x >= 0 && x < g.sites, "decompose_blocks: site out of range");
    const int d = g.dim;
    const SiteSplit sp = split_at(g, x);
    const Eigen::Index R = sp.rest;
    const Matrix hd = h.dense();

    BlockDecomposition out;
    out.site = x;
    out.d = d;
    out.blocks.assign(d, std::vector<Matrix>(d, Matrix::Zero(R, R)));
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            Matrix& b = out.blocks[j][k];
            for (Eigen::Index c = 0; c < R; ++c) {
                const Eigen::Index cc = sp.chain_index(c, k, d);
                for (Eigen::Index r = 0; r < R; ++r) b(r, c) = hd(sp.chain_index(r, j, d), cc);
            }
        }

    Matrix mean_diag = Matrix::Zero(R, R);
    for (int m = 0; m < d; ++m) mean_diag += out.blocks[m][m];
    mean_diag /= static_cast<double>(d);
    const Matrix id = Matrix::Identity(R, R);
    const Matrix mean_diag_traceless = mean_diag - (mean_diag.trace() / static_cast<double>(R)) * id;

    double sum = 0.0;
    out.coupling.assign(d, std::vector<Matrix>(d));
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            const Matrix& b = out.blocks[j][k];
            Matrix c = b - (b.trace() / static_cast<double>(R)) * id;
            if (j == k) c -= mean_diag_traceless;
            sum += c.cwiseAbs2().sum();
            out.coupling[j][k] = std::move(c);
        }
    out.block_sum = sum / static_cast<double>(g.hilbert_dim());
    return out;
}

BlockDecomposition decompose_blocks(const HamiltonianSpec& spec, int x) { return decompose_blocks(assemble(spec), x); }

ObstructionReport obstruction(const HamiltonianSpec& spec, int x, const ObstructionOptions& opts) {
    return obstruction(assemble(spec), x, spec.name, opts);
}

ObstructionReport obstruction(const LatticeOperator& h, int x, const std::string& name,
                              const ObstructionOptions& opts) {
    const auto& g = h.geometry();
    require(x >= 0 && x < g.sites, "obstruction: site out of range");
    if (hermiticity_defect(h) > 1e-10) fail("obstruction: Hamiltonian is not self-adjoint");
    const int d = g.dim;
    const Eigen::Index D = g.hilbert_dim();
    const SiteSplit sp = split_at(g, x);
    const Eigen::Index R = sp.rest;
    const Eigen::Index rank = R * R;
    const SparseMatrix hs = h.sparse();
    const double unit_scale = std::sqrt(static_cast<double>(R));  // normalizes 1_x (x) E_ab

    // Column (a,b) of K is vec((1 - E_x)[H, e_ab]) for the orthonormal basis
    // e_ab of the range of P.
    std::vector<Triplet> trips;
    for (Eigen::Index bcol = 0; bcol < R; ++bcol)
        for (Eigen::Index arow = 0; arow < R; ++arow) {
            std::vector<Triplet> et;
            for (int s = 0; s < d; ++s)
                et.emplace_back(sp.chain_index(arow, s, d), sp.chain_index(bcol, s, d), unit_scale);
            SparseMatrix e(D, D);
            e.setFromTriplets(et.begin(), et.end());
            const SparseMatrix comm = SparseMatrix(hs * e) - SparseMatrix(e * hs);
            SparseMatrix v = comm - conditional_expectation(comm, x, g);
            v.prune(cplx(0.0, 0.0), 0.0);
            const Eigen::Index col = arow + bcol * R;
            for (Eigen::Index k = 0; k < v.outerSize(); ++k)
                for (SparseMatrix::InnerIterator it(v, k); it; ++it)
                    trips.emplace_back(it.row() + it.col() * D, col, it.value());
        }
    SparseMatrix kmat(D * D, rank);
    kmat.setFromTriplets(trips.begin(), trips.end());
    const double inv_dim = 1.0 / static_cast<double>(D);

    ObstructionReport rep;
    rep.model = name;
    rep.site = x;
    rep.obs_hs = std::sqrt(kmat.squaredNorm() * inv_dim / static_cast<double>(rank));

    if (rank <= opts.dense_rank_cap) {
        const Matrix gram = Matrix(SparseMatrix(kmat.adjoint()) * kmat) * inv_dim;
        Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) throw Error(ErrorKind::NonConvergence, "obstruction: eigen-solve failed");
        const double top = es.eigenvalues()(rank - 1);
        rep.min_eigenvalue = es.eigenvalues()(0);
        rep.obs_norm = std::sqrt(std::max(0.0, top));
    } else {
        const SparseMatrix kadj = kmat.adjoint();
        const auto ext = lanczos_extremal([&](const Vector& v) -> Vector { return (kadj * (kmat * v)) * inv_dim; },
                                          rank, 1e-12);
        rep.min_eigenvalue = ext.smallest;
        rep.obs_norm = std::sqrt(std::max(0.0, ext.largest));
    }
    rep.block_sum = decompose_blocks(h, x).block_sum;
    const double scale = std::max(1.0, h.hs_norm() * h.hs_norm());
    rep.classification = rep.block_sum > kCouplingThreshold * scale ? Coupling::Coupled : Coupling::OnSiteOnly;
    return rep;
}

double calibrate_block_ratio() {
    const ChainGeometry g(2, 2, Boundary::Open);
    const auto rep = obstruction(heisenberg(g), 0);
    return rep.obs_hs * rep.obs_hs / rep.block_sum;
}

// ---------------------------------------------------------------------------

namespace {

Matrix local_twist(const Matrix& generator, double angle) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(generator);
    Vector ph(es.eigenvalues().size());
    for (Eigen::Index i = 0; i < ph.size(); ++i) ph(i) = std::exp(cplx(0.0, angle * es.eigenvalues()(i)));
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

bool is_diagonal(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (i != j && m(i, j) != cplx(0.0, 0.0)) return false;
    return true;
}

}  // namespace

LatticeOperator twist_unitary(const TwistSpec& spec, const ChainGeometry& g) {
    require(spec.generator.rows() == g.dim && spec.generator.cols() == g.dim, "twist: generator must be d x d");
    require((spec.generator - spec.generator.adjoint()).cwiseAbs().maxCoeff() <= 1e-12,
            "twist: generator must be self-adjoint");
    require(spec.weights.empty() || static_cast<int>(spec.weights.size()) == g.sites,
            "twist: weights must have one entry per site");
    const bool diag = is_diagonal(spec.generator);
    LatticeOperator w = LatticeOperator::identity(g);
    for (int x = 0; x < g.sites; ++x) {
        Matrix u;
        if (diag) {
            // exact phases for diagonal generators
            u = Matrix::Zero(g.dim, g.dim);
            for (int s = 0; s < g.dim; ++s)
                u(s, s) = std::exp(cplx(0.0, spec.g * spec.weight(x) * spec.generator(s, s).real()));
        } else {
            u = local_twist(spec.generator, spec.g * spec.weight(x));
        }
        w = w * embed_at(u, x, g);
    }
    return w;
}

LatticeOperator twist(const TwistSpec& spec, const LatticeOperator& a) {
    if (spec.g == 0.0) return a;
    const LatticeOperator w = twist_unitary(spec, a.geometry());
    return w * a * w.adjoint();
}

CovarianceDefect covariance_defect(const HamiltonianSpec& spec, const TwistSpec& tw, const NormOptions& norm) {
    const auto& g = spec.geometry;
    require(g.boundary == Boundary::Periodic, "covariance_defect: needs a periodic chain");
    require(g.sites >= 4, "covariance_defect: chain too short (need at least 4 sites)");
    spec.validate();
    const LatticeOperator w = twist_unitary(tw, g);
    const LatticeOperator wd = w.adjoint();
    std::vector<LatticeOperator> twisted;
    for (int x = 0; x + 1 < g.sites; ++x) twisted.push_back(w * hamiltonian_density(spec, x) * wd);
    CovarianceDefect out;
    // Bulk bonds: x and x+1 both avoid the wrap-around bond (L-1, 0).
    for (int x = 0; x + 2 < g.sites; ++x) {
        const LatticeOperator diff = shift(twisted[x], 1) - twisted[x + 1];
        const double v = diff.is_sparse() ? spectral_norm(*diff.sparse_ptr(), norm) : spectral_norm(*diff.dense_ptr(), norm);
        out.per_bond.push_back(v);
        out.max_defect = std::max(out.max_defect, v);
    }
    return out;
}

Matrix default_twist_generator(const HamiltonianSpec& spec, int j, int k) {
    if (spec.name == "exchange" || spec.name == "pair" || spec.name == "pair_diagonal")
        return level_difference(spec.d, j, k);
    if (spec.d == 2) return pauli_z();
    return level_difference(spec.d, j, k);
}

std::vector<EscapeRow> eigenvector_escape_probe(const HamiltonianSpec& spec, const TwistSpec& tw,
                                                const std::vector<LatticeOperator>& candidates,
                                                const std::vector<double>& ts, const std::vector<double>& gs,
                                                const PropagatorOptions& popts) {
    const LatticeOperator h = assemble(spec);
    const Propagator p(h, popts);
    const auto& g = spec.geometry;
    std::vector<EscapeRow> rows;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const auto& cand = candidates[c];
        require(cand.geometry() == g, "eigenvector_escape_probe: candidate geometry mismatch");
        const double nrm = cand.hs_norm();
        require(nrm > 0.0, "eigenvector_escape_probe: zero candidate");
        const Matrix a = cand.dense() / nrm;
        const Matrix ha = h.left_apply(a) - h.right_apply(a);
        const double energy = std::real((a.conjugate().cwiseProduct(ha)).sum()) / static_cast<double>(g.hilbert_dim());
        const double eig_res = normalized_hs_norm(Matrix(ha - energy * a));
        for (double gv : gs) {
            TwistSpec tg = tw;
            tg.g = gv;
            const LatticeOperator twisted = twist(tg, cand);
            const double tw_res = normalized_hs_norm(Matrix(twisted.dense() - cand.dense())) / nrm;
            for (double t : ts) {
                const Matrix evolved = p.evolve_matrix(a, t);
                const double t_res = normalized_hs_norm(Matrix(evolved - std::exp(cplx(0.0, energy * t)) * a));
                rows.push_back({c, gv, t, energy, eig_res, tw_res, t_res});
            }
        }
    }
    return rows;
}

}  // namespace qlat
