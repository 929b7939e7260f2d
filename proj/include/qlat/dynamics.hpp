#pragma once

// Heisenberg-picture evolution tau_t(A) = e^{iHt} A e^{-iHt} and the
// diagnostics built on it.

#include <memory>
#include <vector>

#include "qlat/gns.hpp"

namespace qlat {

enum class PropagatorMethod { Auto, Exact, Krylov };

const char* to_string(PropagatorMethod m);
PropagatorMethod propagator_method_from_string(const std::string& s);

struct PropagatorOptions {
    PropagatorMethod method = PropagatorMethod::Auto;
    // Auto switches to Krylov above this Hilbert-space dimension.
    Eigen::Index krylov_threshold = 1024;
    double krylov_tol = 1e-10;
    int krylov_max_dim = 40;
};

struct KrylovStats {
    int steps = 0;
    int max_subspace = 0;
    double max_residual = 0.0;
};

class Propagator {
public:
    explicit Propagator(LatticeOperator h, PropagatorOptions opts = {}, std::vector<double> grid = {});

    PropagatorMethod method() const { return method_; }
    const LatticeOperator& hamiltonian() const { return h_; }
    const std::vector<double>& grid() const { return grid_; }
    const PropagatorOptions& options() const { return opts_; }

    // Exact method only.
    const RealVector& energies() const;
    const Matrix& eigenvectors() const;
    Matrix unitary(double t) const;

    LatticeOperator evolve_operator(const LatticeOperator& a, double t) const;
    // Raw dense version without support bookkeeping.
    Matrix evolve_matrix(const Matrix& a, double t, KrylovStats* stats = nullptr) const;

    GnsVector evolve(const GnsVector& v, double t) const;
    // W_t S W_t^dag, W_t|B> = |tau_t(B)>.
    DoubledOperator evolve_doubled(const DoubledOperator& s, double t) const;

private:
    Matrix krylov_evolve(const Matrix& a, double t, KrylovStats* stats) const;

    LatticeOperator h_;
    PropagatorOptions opts_;
    PropagatorMethod method_;
    std::vector<double> grid_;
    RealVector energies_;
    Matrix eigenvectors_;
};

struct LightConeScan {
    std::vector<int> xs;
    std::vector<double> ts;
    // values[it][ix] = ||[tau_t(shift(A, x)), B]||
    std::vector<std::vector<double>> values;
};

// `a` is the observable localized near site 0; it is shifted to each x.
LightConeScan light_cone_scan(const Propagator& p, const LatticeOperator& a, const LatticeOperator& b,
                              const std::vector<int>& xs, const std::vector<double>& ts,
                              const NormOptions& norm = {});

struct CesaroResult {
    double final_value = 0.0;
    std::vector<double> running;
};

// Running mean (1/(T - t0)) int_{t0}^{T} f via the trapezoid rule on a
// uniform grid. running[0] = f(t0).
CesaroResult cesaro_mean(const std::vector<double>& ts, const std::vector<double>& f);
std::vector<cplx> cesaro_mean_complex(const std::vector<double>& ts, const std::vector<cplx>& f);

// ||(1 - P_x) W_t P_x W_t^dag |v>|| for each t.
std::vector<double> projector_leakage(const Propagator& p, int x, const GnsVector& v, const std::vector<double>& ts);

// Sorted eigenvalues of a normal matrix, compared elementwise after
// sorting by (real, imag).
double spectrum_distance(const Matrix& a, const Matrix& b);

}  // namespace qlat
