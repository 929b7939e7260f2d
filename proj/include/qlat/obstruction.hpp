#pragma once

// The non-abelianess obstruction P H^(1-P) H^ P built from the entangled
// site projector P and the adjoint generator H^, its block-matrix
// counterpart, and twisted automorphisms gamma(g).

#include <optional>
#include <string>
#include <vector>

#include "qlat/dynamics.hpp"
#include "qlat/hamiltonians.hpp"

namespace qlat {

enum class Coupling { OnSiteOnly, Coupled };
const char* to_string(Coupling c);

struct ObstructionReport {
    std::string model;
    int site = 0;
    // ||(1 - P) H^ P||, spectral norm over the doubled space.
    double obs_norm = 0.0;
    // sqrt(tr(P H^(1-P) H^ P) / rank P): the same operator in the normalized
    // Hilbert-Schmidt norm.
    double obs_hs = 0.0;
    // Smallest eigenvalue of P H^(1-P) H^ P restricted to the range of P.
    double min_eigenvalue = 0.0;
    double block_sum = 0.0;
    Coupling classification = Coupling::OnSiteOnly;
};

// H = sum_{jk} |j><k|_x (x) R_{jk}. The coupling content C_{jk} is what
// remains after removing the on-site part (scalar R_{jk}) and the rest-only
// part (j-independent diagonal R_{jj}); block_sum = ||C||^2 in the normalized
// Hilbert-Schmidt norm, zero iff H has no site-x <-> rest coupling.
struct BlockDecomposition {
    int site = 0;
    int d = 0;
    std::vector<std::vector<Matrix>> blocks;    // R_{jk}, each d^{L-1} x d^{L-1}
    std::vector<std::vector<Matrix>> coupling;  // C_{jk}
    double block_sum = 0.0;
};

BlockDecomposition decompose_blocks(const LatticeOperator& h, int x);
BlockDecomposition decompose_blocks(const HamiltonianSpec& spec, int x);

// Classification threshold on block_sum.
inline constexpr double kCouplingThreshold = 1e-20;

struct ObstructionOptions {
    // Above this rank of P the spectral part switches to Lanczos.
    std::int64_t dense_rank_cap = 4096;
};

ObstructionReport obstruction(const HamiltonianSpec& spec, int x, const ObstructionOptions& opts = {});
ObstructionReport obstruction(const LatticeOperator& h, int x, const std::string& name,
                              const ObstructionOptions& opts = {});

// obs_hs^2 / block_sum on the L = 2 Heisenberg reference.
double calibrate_block_ratio();

struct TwistSpec {
    Matrix generator;         // B0, d x d self-adjoint
    std::vector<int> weights;  // n(x); empty means n(x) = x
    double g = 0.0;

    int weight(int x) const { return weights.empty() ? x : weights.at(x); }
};

// e^{i g sum_x n(x) B_x}
LatticeOperator twist_unitary(const TwistSpec& spec, const ChainGeometry& geom);
LatticeOperator twist(const TwistSpec& spec, const LatticeOperator& a);

struct CovarianceDefect {
    double max_defect = 0.0;
    std::vector<double> per_bond;
};

// max over bulk bonds x of ||shift(gamma(h_x), 1) - gamma(h_{x+1})|| where
// h_x is the Hamiltonian density at x. Requires a periodic chain with L >= 4.
CovarianceDefect covariance_defect(const HamiltonianSpec& spec, const TwistSpec& twist, const NormOptions& norm = {});

// Default twist generator: sigma_z for the qubit models, |j><j| - |k><k| for
// the level models.
Matrix default_twist_generator(const HamiltonianSpec& spec, int j = 0, int k = 1);

struct EscapeRow {
    std::size_t candidate = 0;
    double g = 0.0;
    double t = 0.0;
    double energy = 0.0;              // Rayleigh quotient <a|H^|a>
    double eigen_residual = 0.0;      // min_E ||(H^ - E) a||
    double twist_residual = 0.0;      // ||(gamma(g) A - A) Omega|| / ||A Omega||
    double time_residual = 0.0;       // ||(W_t - e^{iEt}) a||
};

std::vector<EscapeRow> eigenvector_escape_probe(const HamiltonianSpec& spec, const TwistSpec& twist,
                                                const std::vector<LatticeOperator>& candidates,
                                                const std::vector<double>& ts, const std::vector<double>& gs,
                                                const PropagatorOptions& popts = {});

}  // namespace qlat
