#include "qlat/lattice.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

namespace qlat {

namespace {

Eigen::Index ipow(int base, int exp) {
    Eigen::Index r = 1;
    for (int i = 0; i < exp; ++i) {
        if (r > std::numeric_limits<int>::max() / base)
            throw Error(ErrorKind::SizeCap, "chain Hilbert space dimension overflows");
        r *= base;
    }
    return r;
}

// Stride of site x in the flattened basis index.
Eigen::Index site_stride(const ChainGeometry& g, int x) { return ipow(g.dim, g.sites - 1 - x); }

void check_same_geometry(const ChainGeometry& a, const ChainGeometry& b, const char* what) {
    if (!(a == b)) fail(std::string(what) + ": geometry mismatch");
}

std::int64_t count_nonzeros(const Matrix& m) {
    std::int64_t n = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (m(i, j) != cplx(0.0, 0.0)) ++n;
    return n;
}

bool prefer_sparse(std::int64_t nnz, Eigen::Index dim, std::int64_t cap) {
    if (dim > cap) return true;
    const double density = static_cast<double>(nnz) / (static_cast<double>(dim) * dim);
    return density < 0.05;
}

}  // namespace

const char* to_string(Boundary b) { return b == Boundary::Open ? "open" : "periodic"; }

Boundary boundary_from_string(const std::string& s) {
    if (s == "open") return Boundary::Open;
    if (s == "periodic") return Boundary::Periodic;
    fail("unknown boundary '" + s + "' (expected open|periodic)");
}

ChainGeometry::ChainGeometry(int L, int d, Boundary b, std::int64_t cap)
    : sites(L), dim(d), boundary(b), dense_cap(cap) {
    require(L >= 1, "ChainGeometry: need at least one site");
    require(d >= 2, "ChainGeometry: site dimension must be >= 2");
    hilbert_dim_ = ipow(d, L);
}

int ChainGeometry::wrap(int x) const {
    if (boundary == Boundary::Periodic) {
        int r = x % sites;
        return r < 0 ? r + sites : r;
    }
    require(x >= 0 && x < sites, "site " + std::to_string(x) + " outside open chain of length " +
                                     std::to_string(sites));
    return x;
}

// ---------------------------------------------------------------------------
// conditional expectation and support

Matrix conditional_expectation(const Matrix& b, int x, const ChainGeometry& g) {
    require(x >= 0 && x < g.sites, "conditional_expectation: site out of range");
    const Eigen::Index D = g.hilbert_dim();
    require(b.rows() == D && b.cols() == D, "conditional_expectation: wrong operator dimension");
    const int d = g.dim;
    const Eigen::Index lo = site_stride(g, x);
    const Eigen::Index blocks = D / (d * lo);
    const double inv_d = 1.0 / d;
    Matrix out = Matrix::Zero(D, D);
    for (Eigen::Index hc = 0; hc < blocks; ++hc)
        for (Eigen::Index lc = 0; lc < lo; ++lc) {
            const Eigen::Index c0 = hc * d * lo + lc;
            for (Eigen::Index hr = 0; hr < blocks; ++hr)
                for (Eigen::Index lr = 0; lr < lo; ++lr) {
                    const Eigen::Index r0 = hr * d * lo + lr;
                    cplx t = 0.0;
                    for (int s = 0; s < d; ++s) t += b(r0 + s * lo, c0 + s * lo);
                    t *= inv_d;
                    for (int s = 0; s < d; ++s) out(r0 + s * lo, c0 + s * lo) = t;
                }
        }
    return out;
}

SparseMatrix conditional_expectation(const SparseMatrix& b, int x, const ChainGeometry& g) {
    require(x >= 0 && x < g.sites, "conditional_expectation: site out of range");
    const Eigen::Index D = g.hilbert_dim();
    require(b.rows() == D && b.cols() == D, "conditional_expectation: wrong operator dimension");
    const int d = g.dim;
    const Eigen::Index lo = site_stride(g, x);
    std::unordered_map<std::int64_t, cplx> acc;
    std::vector<std::int64_t> order;
    for (Eigen::Index c = 0; c < b.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(b, c); it; ++it) {
            const Eigen::Index r = it.row();
            const Eigen::Index sr = (r / lo) % d;
            const Eigen::Index sc = (c / lo) % d;
            if (sr != sc) continue;
            const std::int64_t key = static_cast<std::int64_t>(r - sr * lo) * D + (c - sc * lo);
            auto [pos, inserted] = acc.try_emplace(key, cplx(0.0, 0.0));
            if (inserted) order.push_back(key);
            pos->second += it.value();
        }
    std::vector<Triplet> trips;
    trips.reserve(order.size() * d);
    for (const auto key : order) {
        const cplx t = acc[key] / static_cast<double>(d);
        if (t == cplx(0.0, 0.0)) continue;
        const Eigen::Index r0 = key / D;
        const Eigen::Index c0 = key % D;
        for (int s = 0; s < d; ++s) trips.emplace_back(r0 + s * lo, c0 + s * lo, t);
    }
    SparseMatrix out(D, D);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

Support estimate_support(const Matrix& m, const ChainGeometry& g, const Support& candidates,
                         double threshold) {
    Support out;
    for (int x : candidates) {
        const Matrix diff = m - conditional_expectation(m, x, g);
        if (normalized_hs_norm(diff) > threshold) out.push_back(x);
    }
    return out;
}

Support estimate_support(const SparseMatrix& m, const ChainGeometry& g, const Support& candidates,
                         double threshold) {
    Support out;
    for (int x : candidates) {
        const SparseMatrix diff = m - conditional_expectation(m, x, g);
        if (normalized_hs_norm(diff) > threshold) out.push_back(x);
    }
    return out;
}

Support all_sites(const ChainGeometry& g) {
    Support s(g.sites);
    for (int i = 0; i < g.sites; ++i) s[i] = i;
    return s;
}

Support support_union(const Support& a, const Support& b) {
    Support out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool supports_disjoint(const Support& a, const Support& b) {
    Support out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out.empty();
}

// ---------------------------------------------------------------------------
// LatticeOperator

LatticeOperator::LatticeOperator(const ChainGeometry& geom, Matrix m)
    : LatticeOperator(geom, std::move(m), all_sites(geom)) {}

LatticeOperator::LatticeOperator(const ChainGeometry& geom, SparseMatrix m)
    : LatticeOperator(geom, std::move(m), all_sites(geom)) {}

LatticeOperator::LatticeOperator(const ChainGeometry& geom, Matrix m, const Support& candidates)
    : geom_(geom) {
    const Eigen::Index D = geom.hilbert_dim();
    require(m.rows() == D && m.cols() == D, "LatticeOperator: matrix is " + std::to_string(m.rows()) +
                                                "x" + std::to_string(m.cols()) + ", chain needs " +
                                                std::to_string(D));
    const auto nnz = count_nonzeros(m);
    if (prefer_sparse(nnz, D, geom.dense_cap)) {
        if (D > geom.dense_cap && static_cast<double>(nnz) / (double(D) * D) >= 0.05)
            throw Error(ErrorKind::SizeCap, "LatticeOperator: dense operator of dimension " +
                                                std::to_string(D) + " exceeds dense cap " +
                                                std::to_string(geom.dense_cap));
        SparseMatrix s = m.sparseView(0.0, 0.0);
        s.makeCompressed();
        storage_ = std::move(s);
    } else {
        storage_ = std::move(m);
    }
    init(candidates);
}

LatticeOperator::LatticeOperator(const ChainGeometry& geom, SparseMatrix m, const Support& candidates)
    : geom_(geom) {
    const Eigen::Index D = geom.hilbert_dim();
    require(m.rows() == D && m.cols() == D, "LatticeOperator: sparse matrix has wrong dimension");
    m.prune(cplx(0.0, 0.0), 0.0);
    m.makeCompressed();
    if (prefer_sparse(m.nonZeros(), D, geom.dense_cap)) {
        storage_ = std::move(m);
    } else {
        storage_ = Matrix(m);
    }
    init(candidates);
}

void LatticeOperator::init(const Support& candidates) {
    Support c = candidates;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    if (const auto* d = dense_ptr())
        support_ = estimate_support(*d, geom_, c);
    else
        support_ = estimate_support(*sparse_ptr(), geom_, c);
}

LatticeOperator LatticeOperator::identity(const ChainGeometry& geom) {
    SparseMatrix id(geom.hilbert_dim(), geom.hilbert_dim());
    id.setIdentity();
    return LatticeOperator(geom, std::move(id), Support{});
}

LatticeOperator LatticeOperator::zero(const ChainGeometry& geom) {
    return LatticeOperator(geom, SparseMatrix(geom.hilbert_dim(), geom.hilbert_dim()), Support{});
}

Matrix LatticeOperator::dense() const {
    if (const auto* d = dense_ptr()) return *d;
    if (dim() > geom_.dense_cap)
        throw Error(ErrorKind::SizeCap, "dense view of dimension " + std::to_string(dim()) +
                                            " exceeds dense cap " + std::to_string(geom_.dense_cap));
    return Matrix(*sparse_ptr());
}

SparseMatrix LatticeOperator::sparse() const {
    if (const auto* s = sparse_ptr()) return *s;
    SparseMatrix s = dense_ptr()->sparseView(0.0, 0.0);
    s.makeCompressed();
    return s;
}

LatticeOperator LatticeOperator::adjoint() const {
    if (const auto* d = dense_ptr()) return LatticeOperator(geom_, Matrix(d->adjoint()), support_);
    return LatticeOperator(geom_, SparseMatrix(sparse_ptr()->adjoint()), support_);
}

cplx LatticeOperator::trace() const {
    if (const auto* d = dense_ptr()) return d->trace();
    cplx t = 0.0;
    const auto& s = *sparse_ptr();
    for (Eigen::Index k = 0; k < s.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(s, k); it; ++it)
            if (it.row() == it.col()) t += it.value();
    return t;
}

double LatticeOperator::hs_norm() const {
    if (const auto* d = dense_ptr()) return normalized_hs_norm(*d);
    return normalized_hs_norm(*sparse_ptr());
}

Matrix LatticeOperator::left_apply(const Matrix& m) const {
    if (const auto* d = dense_ptr()) return (*d) * m;
    return (*sparse_ptr()) * m;
}

Matrix LatticeOperator::right_apply(const Matrix& m) const {
    if (const auto* d = dense_ptr()) return m * (*d);
    return m * (*sparse_ptr());
}

LatticeOperator operator+(const LatticeOperator& a, const LatticeOperator& b) {
    check_same_geometry(a.geom_, b.geom_, "operator+");
    const Support cand = support_union(a.support_, b.support_);
    if (a.is_sparse() && b.is_sparse())
        return LatticeOperator(a.geom_, SparseMatrix(*a.sparse_ptr() + *b.sparse_ptr()), cand);
    return LatticeOperator(a.geom_, Matrix(a.dense() + b.dense()), cand);
}

LatticeOperator operator-(const LatticeOperator& a, const LatticeOperator& b) {
    return a + cplx(-1.0, 0.0) * b;
}

LatticeOperator operator*(const LatticeOperator& a, const LatticeOperator& b) {
    check_same_geometry(a.geom_, b.geom_, "operator*");
    const Support cand = support_union(a.support_, b.support_);
    if (a.is_sparse() && b.is_sparse())
        return LatticeOperator(a.geom_, SparseMatrix(*a.sparse_ptr() * *b.sparse_ptr()), cand);
    if (a.is_sparse()) return LatticeOperator(a.geom_, Matrix(*a.sparse_ptr() * *b.dense_ptr()), cand);
    if (b.is_sparse()) return LatticeOperator(a.geom_, Matrix(*a.dense_ptr() * *b.sparse_ptr()), cand);
    return LatticeOperator(a.geom_, Matrix(*a.dense_ptr() * *b.dense_ptr()), cand);
}

LatticeOperator operator*(cplx s, const LatticeOperator& a) {
    if (const auto* d = a.dense_ptr()) return LatticeOperator(a.geom_, Matrix(s * *d), a.support_);
    return LatticeOperator(a.geom_, SparseMatrix(s * *a.sparse_ptr()), a.support_);
}

double max_abs_diff(const LatticeOperator& a, const LatticeOperator& b) {
    check_same_geometry(a.geometry(), b.geometry(), "max_abs_diff");
    if (a.is_sparse() && b.is_sparse()) {
        const SparseMatrix diff = a.sparse() - b.sparse();
        double m = 0.0;
        for (Eigen::Index k = 0; k < diff.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(diff, k); it; ++it) m = std::max(m, std::abs(it.value()));
        return m;
    }
    return (a.dense() - b.dense()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// construction, translation, commutators

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

LatticeOperator embed_sites(const Matrix& local, std::span<const int> sites, const ChainGeometry& g) {
    const int k = static_cast<int>(sites.size());
    require(k >= 1, "embed_sites: no sites given");
    const Eigen::Index local_dim = ipow(g.dim, k);
    require(local.rows() == local_dim && local.cols() == local_dim,
            "embed_sites: local operator has wrong dimension for " + std::to_string(k) + " site(s) of dimension " +
                std::to_string(g.dim));
    std::vector<Eigen::Index> strides(k);
    Support cand;
    for (int i = 0; i < k; ++i) {
        require(sites[i] >= 0 && sites[i] < g.sites, "embed_sites: site " + std::to_string(sites[i]) +
                                                         " out of range [0, " + std::to_string(g.sites) + ")");
        strides[i] = site_stride(g, sites[i]);
        cand.push_back(sites[i]);
    }
    {
        Support sorted = cand;
        std::sort(sorted.begin(), sorted.end());
        require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(), "embed_sites: repeated site");
    }
    const Eigen::Index D = g.hilbert_dim();
    std::vector<Triplet> trips;
    // Iterate over basis rows; local digits select the row of `local`.
    for (Eigen::Index row = 0; row < D; ++row) {
        Eigen::Index lr = 0;
        Eigen::Index base = row;
        for (int i = 0; i < k; ++i) {
            const Eigen::Index digit = (row / strides[i]) % g.dim;
            lr = lr * g.dim + digit;
            base -= digit * strides[i];
        }
        for (Eigen::Index lc = 0; lc < local_dim; ++lc) {
            const cplx v = local(lr, lc);
            if (v == cplx(0.0, 0.0)) continue;
            Eigen::Index col = base;
            Eigen::Index rem = lc;
            for (int i = k - 1; i >= 0; --i) {
                col += (rem % g.dim) * strides[i];
                rem /= g.dim;
            }
            trips.emplace_back(row, col, v);
        }
    }
    SparseMatrix m(D, D);
    m.setFromTriplets(trips.begin(), trips.end());
    return LatticeOperator(g, std::move(m), cand);
}

LatticeOperator embed_at(const Matrix& site_op, int x, const ChainGeometry& g) {
    require(x >= 0 && x < g.sites, "embed_at: site " + std::to_string(x) + " out of range");
    require(site_op.rows() == g.dim && site_op.cols() == g.dim, "embed_at: site operator must be " +
                                                                   std::to_string(g.dim) + "x" +
                                                                   std::to_string(g.dim));
    const int s[1] = {x};
    return embed_sites(site_op, s, g);
}

Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> shift_permutation(const ChainGeometry& g, int y) {
    const Eigen::Index D = g.hilbert_dim();
    const int L = g.sites;
    int ys = y % L;
    if (ys < 0) ys += L;
    std::vector<Eigen::Index> strides(L);
    for (int k = 0; k < L; ++k) strides[k] = site_stride(g, k);
    Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> p(D);
    for (Eigen::Index i = 0; i < D; ++i) {
        Eigen::Index j = 0;
        for (int k = 0; k < L; ++k) {
            const Eigen::Index digit = (i / strides[k]) % g.dim;
            j += digit * strides[(k + ys) % L];
        }
        p.indices()(i) = static_cast<int>(j);
    }
    return p;
}

LatticeOperator shift(const LatticeOperator& op, int y) {
    const auto& g = op.geometry();
    Support moved;
    for (int s : op.support()) {
        const int t = s + y;
        if (g.boundary == Boundary::Open && (t < 0 || t >= g.sites))
            fail("shift: support site " + std::to_string(s) + " would leave the open chain");
        moved.push_back(g.wrap(t));
    }
    std::sort(moved.begin(), moved.end());
    const auto p = shift_permutation(g, y);
    if (const auto* s = op.sparse_ptr()) {
        const SparseMatrix left = p * (*s);
        return LatticeOperator(g, SparseMatrix(left * p.transpose()), moved);
    }
    return LatticeOperator(g, Matrix(p * (*op.dense_ptr()) * p.transpose()), moved);
}

double commutator_norm(const LatticeOperator& a, const LatticeOperator& b, const NormOptions& opts) {
    check_same_geometry(a.geometry(), b.geometry(), "commutator_norm");
    if (supports_disjoint(a.support(), b.support())) return 0.0;
    if (a.is_sparse() && b.is_sparse()) {
        const SparseMatrix c = (*a.sparse_ptr()) * (*b.sparse_ptr()) - (*b.sparse_ptr()) * (*a.sparse_ptr());
        return spectral_norm(c, opts);
    }
    const Matrix ad = a.dense();
    const Matrix bd = b.dense();
    return spectral_norm(Matrix(ad * bd - bd * ad), opts);
}

LatticeOperator conditional_expectation(const LatticeOperator& b, int x) {
    Support cand;
    for (int s : b.support())
        if (s != x) cand.push_back(s);
    if (const auto* s = b.sparse_ptr())
        return LatticeOperator(b.geometry(), conditional_expectation(*s, x, b.geometry()), cand);
    return LatticeOperator(b.geometry(), conditional_expectation(*b.dense_ptr(), x, b.geometry()), cand);
}

std::vector<double> support_residuals(const LatticeOperator& op) {
    const auto& g = op.geometry();
    std::vector<double> out(g.sites);
    for (int x = 0; x < g.sites; ++x) {
        if (const auto* s = op.sparse_ptr())
            out[x] = normalized_hs_norm(SparseMatrix(*s - conditional_expectation(*s, x, g)));
        else
            out[x] = normalized_hs_norm(Matrix(*op.dense_ptr() - conditional_expectation(*op.dense_ptr(), x, g)));
    }
    return out;
}

}  // namespace qlat
