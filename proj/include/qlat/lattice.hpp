#pragma once

// Finite chains of d-level sites and operators on them.
//
// Basis ordering: site 0 is the most significant tensor factor, so
// embed_at(A, 0) == A (x) 1 (x) ... (x) 1 in Kronecker notation.

#include <span>
#include <variant>
#include <vector>

#include "qlat/common.hpp"
#include "qlat/linalg.hpp"

namespace qlat {

enum class Boundary { Open, Periodic };

const char* to_string(Boundary b);
Boundary boundary_from_string(const std::string& s);

struct ChainGeometry {
    int sites = 2;
    int dim = 2;
    Boundary boundary = Boundary::Periodic;
    // Largest Hilbert-space dimension allowed for dense storage.
    std::int64_t dense_cap = 4096;

    ChainGeometry() = default;
    ChainGeometry(int L, int d, Boundary b = Boundary::Periodic, std::int64_t cap = 4096);

    Eigen::Index hilbert_dim() const { return hilbert_dim_; }
    // Site index reduced into range (periodic) or validated (open).
    int wrap(int x) const;
    friend bool operator==(const ChainGeometry& a, const ChainGeometry& b) {
        return a.sites == b.sites && a.dim == b.dim && a.boundary == b.boundary;
    }

private:
    Eigen::Index hilbert_dim_ = 4;
};

using Support = std::vector<int>;

// Site x belongs to the support of A when ||A - E_x(A)|| exceeds this
// threshold in the normalized Hilbert-Schmidt norm.
inline constexpr double kSupportThreshold = 1e-10;

class LatticeOperator {
public:
    // Storage is chosen automatically: sparse below 5% fill (or when the
    // dimension exceeds the dense cap), dense otherwise. The support is
    // estimated over `candidates` (all sites when omitted).
    LatticeOperator(const ChainGeometry& geom, Matrix m);
    LatticeOperator(const ChainGeometry& geom, SparseMatrix m);
    LatticeOperator(const ChainGeometry& geom, Matrix m, const Support& candidates);
    LatticeOperator(const ChainGeometry& geom, SparseMatrix m, const Support& candidates);

    static LatticeOperator identity(const ChainGeometry& geom);
    static LatticeOperator zero(const ChainGeometry& geom);

    const ChainGeometry& geometry() const { return geom_; }
    const Support& support() const { return support_; }
    Eigen::Index dim() const { return geom_.hilbert_dim(); }
    bool is_sparse() const { return std::holds_alternative<SparseMatrix>(storage_); }

    Matrix dense() const;
    SparseMatrix sparse() const;
    const Matrix* dense_ptr() const { return std::get_if<Matrix>(&storage_); }
    const SparseMatrix* sparse_ptr() const { return std::get_if<SparseMatrix>(&storage_); }

    LatticeOperator adjoint() const;
    cplx trace() const;
    // tr(A) / d^L: the tracial state.
    cplx normalized_trace() const { return trace() / static_cast<double>(dim()); }
    double hs_norm() const;

    // A * m and m * A for raw dense matrices (no support bookkeeping).
    Matrix left_apply(const Matrix& m) const;
    Matrix right_apply(const Matrix& m) const;

    friend LatticeOperator operator+(const LatticeOperator& a, const LatticeOperator& b);
    friend LatticeOperator operator-(const LatticeOperator& a, const LatticeOperator& b);
    friend LatticeOperator operator*(const LatticeOperator& a, const LatticeOperator& b);
    friend LatticeOperator operator*(cplx s, const LatticeOperator& a);

private:
    void init(const Support& candidates);

    ChainGeometry geom_;
    std::variant<Matrix, SparseMatrix> storage_;
    Support support_;
};

// Max-abs entrywise distance (dense comparison).
double max_abs_diff(const LatticeOperator& a, const LatticeOperator& b);

// Places a k-site operator (d^k x d^k, first listed site most significant)
// on the chain.
LatticeOperator embed_sites(const Matrix& local, std::span<const int> sites, const ChainGeometry& geom);
LatticeOperator embed_at(const Matrix& site_op, int x, const ChainGeometry& geom);

// Translation by y sites. Open chains reject supports that would leave
// [0, L); periodic chains wrap.
LatticeOperator shift(const LatticeOperator& op, int y);
Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, int> shift_permutation(const ChainGeometry& geom, int y);

// Spectral norm of [a, b]; exactly 0 for disjoint supports.
double commutator_norm(const LatticeOperator& a, const LatticeOperator& b, const NormOptions& opts = {});

// E_x(B) = (1/d) 1_x (x) tr_x(B): the trace-preserving conditional
// expectation removing the operator content at site x.
Matrix conditional_expectation(const Matrix& b, int x, const ChainGeometry& geom);
SparseMatrix conditional_expectation(const SparseMatrix& b, int x, const ChainGeometry& geom);
LatticeOperator conditional_expectation(const LatticeOperator& b, int x);

// ||B - E_x(B)|| in the normalized HS norm for every site.
std::vector<double> support_residuals(const LatticeOperator& op);
Support estimate_support(const Matrix& m, const ChainGeometry& geom, const Support& candidates,
                         double threshold = kSupportThreshold);
Support estimate_support(const SparseMatrix& m, const ChainGeometry& geom, const Support& candidates,
                         double threshold = kSupportThreshold);

Support all_sites(const ChainGeometry& geom);
Support support_union(const Support& a, const Support& b);
bool supports_disjoint(const Support& a, const Support& b);

// Kronecker product of a list of matrices, first factor most significant.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace qlat
