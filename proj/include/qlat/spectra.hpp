#pragma once

// Spectral diagnostics of the adjoint generator H^ = [H, .] and the
// return-to-equilibrium measurement built on them.

#include <string>
#include <vector>

#include "qlat/dynamics.hpp"
#include "qlat/hamiltonians.hpp"

namespace qlat {

// Eigenvalues of H^ closer than this to zero are treated as zero; Bohr
// frequencies below it are clustered with 0.
inline constexpr double kZeroFrequencyTol = 1e-9;

struct OverlapProfile {
    std::string label;
    // ||P_0 v||^2 / ||v||^2
    double zero_overlap = 0.0;
    // weight of v on each distinct eigenvalue of H^ (same order as levels)
    std::vector<double> weights;
};

struct SpectrumReport {
    std::vector<double> eigenvalues;        // sorted, with multiplicity
    std::vector<double> levels;             // distinct eigenvalues
    std::vector<int> multiplicities;
    int zero_dim = 0;
    double difference_set_error = 0.0;      // vs {E_i - E_j}
    double negation_asymmetry = 0.0;        // spectrum vs its negative
    double mean_spacing_ratio = 0.0;        // <r> over the chain levels
    std::vector<OverlapProfile> overlaps;
};

struct LabeledOperator {
    std::string label;
    LatticeOperator op;
};

// Materializes H^ (requires d^{2L} <= cap) and diagonalizes it.
SpectrumReport generator_spectrum(const HamiltonianSpec& spec, const std::vector<LabeledOperator>& probes = {},
                                  std::int64_t cap = 4096);

// Orthonormal basis (columns, vectorized column-major) of ker H^ from the
// explicit eigendecomposition of the materialized generator.
Matrix zero_eigenspace(const LatticeOperator& h, std::int64_t cap = 4096);

// rho = B B^dag / omega(B B^dag) for the vector Pi(B)Omega normalized.
Matrix perturbed_density(const LatticeOperator& b);

// Closed-form Cesaro mean (1/T) int_0^T omega(rho tau_t(a)) dt from the
// Bohr-frequency expansion in the eigenbasis of H.
cplx spectral_cesaro_mean(const Propagator& p, const Matrix& rho, const Matrix& a, double T);
// Its T -> infinity limit: the zero-frequency part.
cplx bohr_limit(const Propagator& p, const Matrix& rho, const Matrix& a);
// <a^dag | P_0 | rho> with P_0 an explicit zero-eigenspace basis.
cplx zero_space_compression(const Matrix& basis, const Matrix& rho, const Matrix& a);

struct EquilibriumReport {
    std::vector<double> ts;
    std::vector<cplx> series;     // <psi|tau_t(Pi(a))|psi>
    std::vector<cplx> running;    // trapezoid Cesaro mean
    cplx tracial;                 // tr(a) / d^L
    cplx limit;                   // zero-frequency limit of the mean
    double offset = 0.0;          // |running(T) - tracial|
    double limit_offset = 0.0;    // |limit - tracial|
    double floor = 0.0;           // translation-averaged offset + finite-T band
    double band = 0.0;
    double horizon = 0.0;         // 1 / min nonzero Bohr gap
};

// `perturbation` B defines psi = Pi(B)Omega / ||Pi(B)Omega||; the identity
// gives psi = Omega. Requires a time grid starting at 0.
EquilibriumReport return_to_equilibrium(const HamiltonianSpec& spec, const LatticeOperator& perturbation,
                                        const LatticeOperator& a, const std::vector<double>& ts);

// Mean ratio of consecutive level spacings min(s_n, s_{n+1}) / max(...).
double mean_spacing_ratio(const std::vector<double>& sorted_levels);

}  // namespace qlat
