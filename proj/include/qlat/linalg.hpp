#pragma once

#include <functional>

#include "qlat/common.hpp"

namespace qlat {

struct NormOptions {
    double tol = 1e-10;
    int max_iter = 400;  // Krylov vectors
    std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
    // Full SVD is used strictly below this dimension.
    Eigen::Index dense_below = 256;
    // Lanczos on C^dag C that fails to converge falls back to a dense SVD up
    // to this dimension and throws NonConvergence beyond it.
    Eigen::Index fallback_cap = 4096;
};

// Largest singular value.
double spectral_norm(const Matrix& m, const NormOptions& opts = {});
double spectral_norm(const SparseMatrix& m, const NormOptions& opts = {});

// sqrt(tr(A^dag A) / dim): the norm of the tracial GNS inner product.
double normalized_hs_norm(const Matrix& m);
double normalized_hs_norm(const SparseMatrix& m);

// Largest and smallest eigenvalue of a Hermitian operator given only by its
// action, via Lanczos with full reorthogonalization.
struct ExtremalEigen {
    double largest = 0.0;
    double smallest = 0.0;
    int iterations = 0;
};
ExtremalEigen lanczos_extremal(const std::function<Vector(const Vector&)>& apply,
                               Eigen::Index dim, double tol = 1e-12,
                               std::uint64_t seed = 0x5eedULL, int max_dim = 300);

// Deterministic complex Gaussian vector.
Vector random_vector(Eigen::Index n, std::uint64_t seed);

}  // namespace qlat
