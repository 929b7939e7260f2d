#pragma once

// Translation-covariant nearest-neighbour chain Hamiltonians
//
//     H = sum_x on_site(x) + sum_<x,x+1> coupling(x, x+1)
//
// Periodic chains include the wrap-around bond (L-1, 0).

#include <optional>
#include <string>
#include <vector>

#include "qlat/lattice.hpp"

namespace qlat {

struct HamiltonianSpec {
    std::string name;
    int d = 2;
    std::optional<Matrix> on_site;  // d x d
    Matrix coupling;                // d^2 x d^2, first factor is the left site
    ChainGeometry geometry;

    bool has_coupling() const;
    // Throws unless both blocks are self-adjoint to `tol` and sized for d.
    void validate(double tol = 1e-12) const;
};

// Pauli matrices; d = 2 only.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
// |j><j| - |k><k|
Matrix level_difference(int d, int j, int k);
// |j><j|
Matrix level_projector(int d, int j);

HamiltonianSpec heisenberg(const ChainGeometry& geom);
HamiltonianSpec xy_model(const ChainGeometry& geom);
HamiltonianSpec emch_radin(const ChainGeometry& geom);
// |j k><k j| + |k j><j k|
HamiltonianSpec exchange_model(int j, int k, const ChainGeometry& geom);
// |j j><k k| + |k k><j j|
HamiltonianSpec pair_model(int j, int k, const ChainGeometry& geom);
// |j k><j k| + h.c.; the literal diagonal form, which commutes with the twist
HamiltonianSpec pair_diagonal_model(int j, int k, const ChainGeometry& geom);
HamiltonianSpec onsite_model(const Matrix& a, const ChainGeometry& geom);
HamiltonianSpec custom_model(const std::optional<Matrix>& on_site, const Matrix& coupling, const ChainGeometry& geom,
                             std::string name = "custom");

// Two-site coupling embedded on sites (x, y).
LatticeOperator bond_term(const HamiltonianSpec& spec, int x, int y);
// on_site(x) + coupling(x, x+1): the local density whose translates sum to H.
LatticeOperator hamiltonian_density(const HamiltonianSpec& spec, int x);

std::vector<std::pair<int, int>> bonds(const ChainGeometry& geom);

LatticeOperator assemble(const HamiltonianSpec& spec);

struct ModelInfo {
    std::string name;
    std::string params;
    std::string description;
};
const std::vector<ModelInfo>& model_catalog();

}  // namespace qlat
