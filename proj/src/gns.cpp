#include "qlat/gns.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

namespace qlat {

cplx GnsVector::inner(const GnsVector& other) const {
    require(geometry() == other.geometry(), "GnsVector::inner: geometry mismatch");
    const auto& a = payload_;
    const auto& b = other.payload_;
    cplx s = 0.0;
    if (a.is_sparse() && b.is_sparse()) {
        const SparseMatrix prod = SparseMatrix(a.sparse_ptr()->adjoint()) * (*b.sparse_ptr());
        for (Eigen::Index k = 0; k < prod.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(prod, k); it; ++it)
                if (it.row() == it.col()) s += it.value();
    } else {
        const Matrix ad = a.dense();
        const Matrix bd = b.dense();
        // tr(A^dag B) = sum_ij conj(A_ij) B_ij
        s = (ad.conjugate().cwiseProduct(bd)).sum();
    }
    return s / static_cast<double>(a.dim());
}

GnsVector modular_conjugation(const GnsVector& v) { return GnsVector(v.payload().adjoint()); }

cplx tracial_state(const LatticeOperator& a) { return a.normalized_trace(); }

// ---------------------------------------------------------------------------

namespace {

struct IdentityN {};
struct ZeroN {};
struct LeftN { LatticeOperator a; };
struct RightN { LatticeOperator a; };
struct SiteMapN { int x; Matrix local; };
struct CommutatorN { LatticeOperator h; };
struct ExplicitN { Matrix m; };
struct FunctionN { std::function<Matrix(const Matrix&)> f; std::string label; };
struct ComposeN { std::vector<DoubledOperator> factors; };  // applied right to left
struct SumN { std::vector<std::pair<cplx, DoubledOperator>> terms; };

Matrix apply_site_map(const Matrix& b, int x, const Matrix& local, const ChainGeometry& g) {
    const int d = g.dim;
    const Eigen::Index D = g.hilbert_dim();
    Eigen::Index lo = 1;
    for (int k = x + 1; k < g.sites; ++k) lo *= d;
    const Eigen::Index blocks = D / (d * lo);
    Matrix out(D, D);
    Vector in_vec(d * d);
    for (Eigen::Index hc = 0; hc < blocks; ++hc)
        for (Eigen::Index lc = 0; lc < lo; ++lc) {
            const Eigen::Index c0 = hc * d * lo + lc;
            for (Eigen::Index hr = 0; hr < blocks; ++hr)
                for (Eigen::Index lr = 0; lr < lo; ++lr) {
                    const Eigen::Index r0 = hr * d * lo + lr;
                    for (int bcol = 0; bcol < d; ++bcol)
                        for (int arow = 0; arow < d; ++arow)
                            in_vec(arow + bcol * d) = b(r0 + arow * lo, c0 + bcol * lo);
                    const Vector res = local * in_vec;
                    for (int bcol = 0; bcol < d; ++bcol)
                        for (int arow = 0; arow < d; ++arow)
                            out(r0 + arow * lo, c0 + bcol * lo) = res(arow + bcol * d);
                }
        }
    return out;
}

Matrix vec_basis_unit(Eigen::Index k, Eigen::Index D) {
    Matrix e = Matrix::Zero(D, D);
    e(k % D, k / D) = 1.0;
    return e;
}

Vector vectorize(const Matrix& b) { return Eigen::Map<const Vector>(b.data(), b.size()); }

}  // namespace

struct DoubledOperator::Node {
    ChainGeometry geom;
    std::variant<IdentityN, ZeroN, LeftN, RightN, SiteMapN, CommutatorN, ExplicitN, FunctionN, ComposeN, SumN> v;
};

const ChainGeometry& DoubledOperator::geometry() const { return node_->geom; }

DoubledOperator DoubledOperator::identity(const ChainGeometry& geom) {
    return DoubledOperator(std::make_shared<Node>(Node{geom, IdentityN{}}));
}

DoubledOperator DoubledOperator::zero(const ChainGeometry& geom) {
    return DoubledOperator(std::make_shared<Node>(Node{geom, ZeroN{}}));
}

DoubledOperator DoubledOperator::left(const LatticeOperator& a) {
    return DoubledOperator(std::make_shared<Node>(Node{a.geometry(), LeftN{a}}));
}

DoubledOperator DoubledOperator::right(const LatticeOperator& a) {
    return DoubledOperator(std::make_shared<Node>(Node{a.geometry(), RightN{a}}));
}

DoubledOperator DoubledOperator::site_map(int x, const Matrix& local, const ChainGeometry& geom) {
    require(x >= 0 && x < geom.sites, "site_map: site " + std::to_string(x) + " out of range");
    require(local.rows() == geom.dim * geom.dim && local.cols() == geom.dim * geom.dim,
            "site_map: local superoperator must be d^2 x d^2");
    return DoubledOperator(std::make_shared<Node>(Node{geom, SiteMapN{x, local}}));
}

DoubledOperator DoubledOperator::commutator(const LatticeOperator& h) {
    return DoubledOperator(std::make_shared<Node>(Node{h.geometry(), CommutatorN{h}}));
}

DoubledOperator DoubledOperator::explicit_matrix(const ChainGeometry& geom, Matrix m) {
    const Eigen::Index n = geom.hilbert_dim() * geom.hilbert_dim();
    require(m.rows() == n && m.cols() == n, "explicit_matrix: expected d^{2L} x d^{2L}");
    return DoubledOperator(std::make_shared<Node>(Node{geom, ExplicitN{std::move(m)}}));
}

DoubledOperator DoubledOperator::function(const ChainGeometry& geom, std::function<Matrix(const Matrix&)> f,
                                          std::string label) {
    return DoubledOperator(std::make_shared<Node>(Node{geom, FunctionN{std::move(f), std::move(label)}}));
}

std::string DoubledOperator::describe() const {
    return std::visit(
        [](const auto& n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IdentityN>) return "1";
            else if constexpr (std::is_same_v<T, ZeroN>) return "0";
            else if constexpr (std::is_same_v<T, LeftN>) return "L(A)";
            else if constexpr (std::is_same_v<T, RightN>) return "R(A)";
            else if constexpr (std::is_same_v<T, SiteMapN>) return "S@" + std::to_string(n.x);
            else if constexpr (std::is_same_v<T, CommutatorN>) return "ad(H)";
            else if constexpr (std::is_same_v<T, ExplicitN>) return "M";
            else if constexpr (std::is_same_v<T, FunctionN>) return n.label;
            else if constexpr (std::is_same_v<T, ComposeN>) {
                std::string s = "(";
                for (std::size_t i = 0; i < n.factors.size(); ++i)
                    s += (i ? " . " : "") + n.factors[i].describe();
                return s + ")";
            } else {
                std::string s = "(";
                for (std::size_t i = 0; i < n.terms.size(); ++i)
                    s += (i ? " + " : "") + n.terms[i].second.describe();
                return s + ")";
            }
        },
        node_->v);
}

Matrix DoubledOperator::apply(const Matrix& b) const {
    const auto& g = node_->geom;
    const Eigen::Index D = g.hilbert_dim();
    require(b.rows() == D && b.cols() == D, "DoubledOperator::apply: wrong operator dimension");
    return std::visit(
        [&](const auto& n) -> Matrix {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IdentityN>) return b;
            else if constexpr (std::is_same_v<T, ZeroN>) return Matrix::Zero(D, D);
            else if constexpr (std::is_same_v<T, LeftN>) return n.a.left_apply(b);
            else if constexpr (std::is_same_v<T, RightN>) return n.a.right_apply(b);
            else if constexpr (std::is_same_v<T, SiteMapN>) return apply_site_map(b, n.x, n.local, g);
            else if constexpr (std::is_same_v<T, CommutatorN>) return n.h.left_apply(b) - n.h.right_apply(b);
            else if constexpr (std::is_same_v<T, ExplicitN>) {
                const Vector out = n.m * vectorize(b);
                return Eigen::Map<const Matrix>(out.data(), D, D);
            } else if constexpr (std::is_same_v<T, FunctionN>) return n.f(b);
            else if constexpr (std::is_same_v<T, ComposeN>) {
                Matrix cur = b;
                for (auto it = n.factors.rbegin(); it != n.factors.rend(); ++it) cur = it->apply(cur);
                return cur;
            } else {
                Matrix acc = Matrix::Zero(D, D);
                for (const auto& [c, op] : n.terms) acc += c * op.apply(b);
                return acc;
            }
        },
        node_->v);
}

GnsVector DoubledOperator::apply(const GnsVector& v) const {
    require(v.geometry() == geometry(), "DoubledOperator::apply: geometry mismatch");
    return GnsVector(LatticeOperator(geometry(), apply(v.payload().dense())));
}

Matrix DoubledOperator::to_matrix(std::int64_t cap) const {
    const auto& g = node_->geom;
    const Eigen::Index D = g.hilbert_dim();
    const Eigen::Index N = D * D;
    if (N > cap)
        throw Error(ErrorKind::SizeCap, "doubled-space dimension " + std::to_string(N) + " exceeds cap " +
                                            std::to_string(cap));
    const Matrix id = Matrix::Identity(D, D);
    return std::visit(
        [&](const auto& n) -> Matrix {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IdentityN>) return Matrix::Identity(N, N);
            else if constexpr (std::is_same_v<T, ZeroN>) return Matrix::Zero(N, N);
            else if constexpr (std::is_same_v<T, LeftN>) return kron(id, n.a.dense());
            else if constexpr (std::is_same_v<T, RightN>) return kron(n.a.dense().transpose(), id);
            else if constexpr (std::is_same_v<T, CommutatorN>) {
                const Matrix h = n.h.dense();
                return kron(id, h) - kron(h.transpose(), id);
            } else if constexpr (std::is_same_v<T, ExplicitN>) return n.m;
            else if constexpr (std::is_same_v<T, ComposeN>) {
                Matrix acc = Matrix::Identity(N, N);
                for (const auto& f : n.factors) acc = acc * f.to_matrix(cap);
                return acc;
            } else if constexpr (std::is_same_v<T, SumN>) {
                Matrix acc = Matrix::Zero(N, N);
                for (const auto& [c, op] : n.terms) acc += c * op.to_matrix(cap);
                return acc;
            } else {
                Matrix out(N, N);
                for (Eigen::Index k = 0; k < N; ++k) out.col(k) = vectorize(apply(vec_basis_unit(k, D)));
                return out;
            }
        },
        node_->v);
}

DoubledOperator DoubledOperator::adjoint() const {
    const auto& g = node_->geom;
    return std::visit(
        [&](const auto& n) -> DoubledOperator {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IdentityN> || std::is_same_v<T, ZeroN>) return *this;
            else if constexpr (std::is_same_v<T, LeftN>) return left(n.a.adjoint());
            else if constexpr (std::is_same_v<T, RightN>) return right(n.a.adjoint());
            else if constexpr (std::is_same_v<T, SiteMapN>) return site_map(n.x, n.local.adjoint(), g);
            else if constexpr (std::is_same_v<T, CommutatorN>) return commutator(n.h.adjoint());
            else if constexpr (std::is_same_v<T, ExplicitN>) return explicit_matrix(g, n.m.adjoint());
            else if constexpr (std::is_same_v<T, ComposeN>) {
                ComposeN out;
                for (auto it = n.factors.rbegin(); it != n.factors.rend(); ++it) out.factors.push_back(it->adjoint());
                return DoubledOperator(std::make_shared<Node>(Node{g, std::move(out)}));
            } else if constexpr (std::is_same_v<T, SumN>) {
                SumN out;
                for (const auto& [c, op] : n.terms) out.terms.emplace_back(std::conj(c), op.adjoint());
                return DoubledOperator(std::make_shared<Node>(Node{g, std::move(out)}));
            } else {
                return explicit_matrix(g, to_matrix().adjoint());
            }
        },
        node_->v);
}

DoubledOperator operator*(const DoubledOperator& a, const DoubledOperator& b) {
    require(a.geometry() == b.geometry(), "DoubledOperator product: geometry mismatch");
    ComposeN c{{a, b}};
    return DoubledOperator(std::make_shared<DoubledOperator::Node>(DoubledOperator::Node{a.geometry(), std::move(c)}));
}

DoubledOperator operator+(const DoubledOperator& a, const DoubledOperator& b) {
    require(a.geometry() == b.geometry(), "DoubledOperator sum: geometry mismatch");
    SumN s{{{cplx(1.0), a}, {cplx(1.0), b}}};
    return DoubledOperator(std::make_shared<DoubledOperator::Node>(DoubledOperator::Node{a.geometry(), std::move(s)}));
}

DoubledOperator operator-(const DoubledOperator& a, const DoubledOperator& b) {
    require(a.geometry() == b.geometry(), "DoubledOperator difference: geometry mismatch");
    SumN s{{{cplx(1.0), a}, {cplx(-1.0), b}}};
    return DoubledOperator(std::make_shared<DoubledOperator::Node>(DoubledOperator::Node{a.geometry(), std::move(s)}));
}

DoubledOperator operator*(cplx s, const DoubledOperator& a) {
    SumN n{{{s, a}}};
    return DoubledOperator(std::make_shared<DoubledOperator::Node>(DoubledOperator::Node{a.geometry(), std::move(n)}));
}

// ---------------------------------------------------------------------------

DoubledOperator pi(const LatticeOperator& a) { return DoubledOperator::left(a); }

DoubledOperator j_conjugate(const LatticeOperator& a) { return DoubledOperator::right(a.adjoint()); }

Matrix entangled_projector_local(int d) {
    const Matrix id = Matrix::Identity(d, d);
    const Vector v = vectorize(id);
    return v * v.adjoint() / static_cast<double>(d);
}

DoubledOperator entangled_projector(int x, const ChainGeometry& geom) {
    require(x >= 0 && x < geom.sites, "entangled_projector: site " + std::to_string(x) + " out of range");
    return DoubledOperator::site_map(x, entangled_projector_local(geom.dim), geom);
}

namespace {

// vec(U m U^dag) = (conj(U) (x) U) vec(m)
Matrix conjugation_superop(const Matrix& u) { return kron(u.conjugate(), u); }

struct LocalSpectral {
    int exponent;
    Matrix projector;
    int rank;
};

std::vector<LocalSpectral> local_weyl_projectors(const WeylIndex& r) {
    const int d = r.d;
    const Matrix s = conjugation_superop(weyl_matrix(r));
    Eigen::ComplexEigenSolver<Matrix> es(s);
    if (es.info() != Eigen::Success)
        throw Error(ErrorKind::NonConvergence, "weyl_pair_projectors: eigendecomposition failed");
    std::vector<std::vector<Eigen::Index>> clusters(d);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const cplx lam = es.eigenvalues()(i);
        int best = -1;
        double dist = 1e300;
        for (int k = 0; k < d; ++k) {
            const double dk = std::abs(lam - root_of_unity(k, d));
            if (dk < dist) {
                dist = dk;
                best = k;
            }
        }
        if (dist > 1e-8)
            throw Error(ErrorKind::InvariantViolation, "weyl_pair_projectors: eigenvalue off the d-th roots of unity");
        clusters[best].push_back(i);
    }
    std::vector<LocalSpectral> out;
    for (int k = 0; k < d; ++k) {
        if (clusters[k].empty()) continue;
        Matrix vecs(d * d, static_cast<Eigen::Index>(clusters[k].size()));
        for (std::size_t c = 0; c < clusters[k].size(); ++c) vecs.col(c) = es.eigenvectors().col(clusters[k][c]);
        Eigen::HouseholderQR<Matrix> qr(vecs);
        const Matrix q = qr.householderQ() * Matrix::Identity(d * d, vecs.cols());
        out.push_back({k, q * q.adjoint(), static_cast<int>(vecs.cols())});
    }
    return out;
}

}  // namespace

std::vector<SpectralProjector> weyl_pair_projectors(const WeylIndex& r, int x, const ChainGeometry& geom) {
    require(r.d == geom.dim, "weyl_pair_projectors: index dimension does not match chain");
    require(x >= 0 && x < geom.sites, "weyl_pair_projectors: site out of range");
    std::vector<SpectralProjector> out;
    for (auto& ls : local_weyl_projectors(r)) {
        out.push_back({ls.exponent, root_of_unity(ls.exponent, r.d), ls.rank, ls.projector,
                       DoubledOperator::site_map(x, ls.projector, geom)});
    }
    return out;
}

Matrix joint_fixed_projector_local(int d) {
    Matrix acc = Matrix::Identity(d * d, d * d);
    for (const auto& r : all_weyl_indices(d)) {
        if (r.is_identity()) continue;
        for (const auto& ls : local_weyl_projectors(r))
            if (ls.exponent == 0) acc = acc * ls.projector;
    }
    return acc;
}

double hermiticity_defect(const LatticeOperator& h) {
    if (h.is_sparse()) {
        const SparseMatrix diff = h.sparse() - SparseMatrix(h.sparse().adjoint());
        double m = 0.0;
        for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(diff, k); it; ++it) m = std::max(m, std::abs(it.value()));
        return m;
    }
    const Matrix d = h.dense();
    return (d - d.adjoint()).cwiseAbs().maxCoeff();
}

DoubledOperator adjoint_generator(const LatticeOperator& h, double tol) {
    const double defect = hermiticity_defect(h);
    if (defect > tol) fail("adjoint_generator: Hamiltonian is not self-adjoint (defect " + std::to_string(defect) + ")");
    return DoubledOperator::commutator(h);
}

}  // namespace qlat
