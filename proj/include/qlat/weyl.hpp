#pragma once

// Generalized Pauli (clock-shift) operators of the single-site algebra M^d.
//
// Convention: U_{r1,r2} = X^{r1} Z^{r2} with X|s> = |s+1 mod d> and
// Z|s> = w^s |s>, w = exp(2 pi i / d). With this choice
//
//     U_{r1,r2} U_{t1,t2} = w^{t1 r2} U_{r1+t1, r2+t2}
//
// holds exactly, and phases are carried as integers mod d until a matrix is
// requested.

#include <vector>

#include "qlat/common.hpp"

namespace qlat {

struct WeylIndex {
    int r1 = 0;
    int r2 = 0;
    int d = 2;

    WeylIndex() = default;
    WeylIndex(int r1_, int r2_, int d_);

    bool is_identity() const { return r1 == 0 && r2 == 0; }
    WeylIndex operator+(const WeylIndex& o) const;
    WeylIndex operator-() const;
    friend bool operator==(const WeylIndex&, const WeylIndex&) = default;
};

// w^phase * U_index
struct PhasedWeyl {
    WeylIndex index;
    int phase = 0;

    PhasedWeyl() = default;
    PhasedWeyl(WeylIndex idx, int phase_exponent = 0);
    friend bool operator==(const PhasedWeyl&, const PhasedWeyl&) = default;
};

// exp(2 pi i k / d), reduced mod d first so large exponents stay accurate.
cplx root_of_unity(int k, int d);

Matrix shift_matrix(int d);
Matrix clock_matrix(int d);

Matrix weyl_matrix(const WeylIndex& idx);
Matrix weyl_matrix(const PhasedWeyl& w);

PhasedWeyl weyl_product(const PhasedWeyl& a, const PhasedWeyl& b);

// c with U_a U_b = w^c U_b U_a.
int commutation_phase(const WeylIndex& a, const WeylIndex& b);

// All d^2 indices in (r1, r2) lexicographic order.
std::vector<WeylIndex> all_weyl_indices(int d);

// Indices s with commutation_phase(r, s) == 0 for every r in `against`.
// Pure integer arithmetic; used as the exact counterpart of the joint
// fixed-space computation in the doubled representation.
std::vector<WeylIndex> joint_commutant_indices(const std::vector<WeylIndex>& against);

}  // namespace qlat
