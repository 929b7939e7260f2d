#include "qlat/hamiltonians.hpp"

namespace qlat {

namespace {

void require_qubits(const ChainGeometry& g, const char* model) {
    require(g.dim == 2, std::string(model) + ": requires site dimension 2, got " + std::to_string(g.dim));
}

void require_levels(int d, int j, int k, const char* model) {
    require(j >= 0 && j < d && k >= 0 && k < d, std::string(model) + ": levels must lie in [0, d)");
    require(j != k, std::string(model) + ": levels j and k must differ");
}

Matrix ket_bra(int d, int a, int b, int c, int e) {
    // |a b><c e| on two sites
    Matrix m = Matrix::Zero(d * d, d * d);
    m(a * d + b, c * d + e) = 1.0;
    return m;
}

}  // namespace

bool HamiltonianSpec::has_coupling() const { return coupling.size() > 0 && coupling.cwiseAbs().maxCoeff() > 0.0; }

void HamiltonianSpec::validate(double tol) const {
    require(d == geometry.dim, name + ": model dimension does not match geometry");
    require(coupling.rows() == d * d && coupling.cols() == d * d, name + ": coupling must be d^2 x d^2");
    require((coupling - coupling.adjoint()).cwiseAbs().maxCoeff() <= tol, name + ": coupling is not self-adjoint");
    if (on_site) {
        require(on_site->rows() == d && on_site->cols() == d, name + ": on-site term must be d x d");
        require((*on_site - on_site->adjoint()).cwiseAbs().maxCoeff() <= tol, name + ": on-site term is not self-adjoint");
    }
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, cplx(0, -1), cplx(0, 1), 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix level_projector(int d, int j) {
    require(j >= 0 && j < d, "level_projector: level out of range");
    Matrix m = Matrix::Zero(d, d);
    m(j, j) = 1.0;
    return m;
}

Matrix level_difference(int d, int j, int k) { return level_projector(d, j) - level_projector(d, k); }

HamiltonianSpec heisenberg(const ChainGeometry& g) {
    require_qubits(g, "heisenberg");
    const Matrix x = pauli_x(), y = pauli_y(), z = pauli_z();
    return {"heisenberg", 2, std::nullopt, kron(x, x) + kron(y, y) + kron(z, z), g};
}

HamiltonianSpec xy_model(const ChainGeometry& g) {
    require_qubits(g, "xy");
    const Matrix x = pauli_x(), y = pauli_y();
    return {"xy", 2, std::nullopt, kron(x, x) + kron(y, y), g};
}

HamiltonianSpec emch_radin(const ChainGeometry& g) {
    require_qubits(g, "emch_radin");
    const Matrix z = pauli_z();
    return {"emch_radin", 2, std::nullopt, kron(z, z), g};
}

HamiltonianSpec exchange_model(int j, int k, const ChainGeometry& g) {
    const int d = g.dim;
    require_levels(d, j, k, "exchange");
    return {"exchange", d, std::nullopt, ket_bra(d, j, k, k, j) + ket_bra(d, k, j, j, k), g};
}

HamiltonianSpec pair_model(int j, int k, const ChainGeometry& g) {
    const int d = g.dim;
    require_levels(d, j, k, "pair");
    return {"pair", d, std::nullopt, ket_bra(d, j, j, k, k) + ket_bra(d, k, k, j, j), g};
}

HamiltonianSpec pair_diagonal_model(int j, int k, const ChainGeometry& g) {
    const int d = g.dim;
    require_levels(d, j, k, "pair_diagonal");
    return {"pair_diagonal", d, std::nullopt, 2.0 * ket_bra(d, j, k, j, k), g};
}

HamiltonianSpec onsite_model(const Matrix& a, const ChainGeometry& g) {
    HamiltonianSpec s{"onsite", g.dim, a, Matrix::Zero(g.dim * g.dim, g.dim * g.dim), g};
    s.validate();
    return s;
}

HamiltonianSpec custom_model(const std::optional<Matrix>& on_site, const Matrix& coupling, const ChainGeometry& g,
                             std::string name) {
    HamiltonianSpec s{std::move(name), g.dim, on_site, coupling, g};
    s.validate();
    return s;
}

std::vector<std::pair<int, int>> bonds(const ChainGeometry& g) {
    std::vector<std::pair<int, int>> out;
    for (int x = 0; x + 1 < g.sites; ++x) out.emplace_back(x, x + 1);
    if (g.boundary == Boundary::Periodic && g.sites >= 2) out.emplace_back(g.sites - 1, 0);
    return out;
}

LatticeOperator bond_term(const HamiltonianSpec& spec, int x, int y) {
    const int s[2] = {x, y};
    return embed_sites(spec.coupling, s, spec.geometry);
}

LatticeOperator hamiltonian_density(const HamiltonianSpec& spec, int x) {
    const auto& g = spec.geometry;
    LatticeOperator h = LatticeOperator::zero(g);
    if (spec.on_site) h = h + embed_at(*spec.on_site, g.wrap(x), g);
    if (spec.has_coupling()) h = h + bond_term(spec, g.wrap(x), g.wrap(x + 1));
    return h;
}

LatticeOperator assemble(const HamiltonianSpec& spec) {
    spec.validate();
    const auto& g = spec.geometry;
    // Accumulate in sparse form; the final operator picks its own storage.
    SparseMatrix acc(g.hilbert_dim(), g.hilbert_dim());
    if (spec.on_site)
        for (int x = 0; x < g.sites; ++x) acc += embed_at(*spec.on_site, x, g).sparse();
    if (spec.has_coupling())
        for (const auto& [x, y] : bonds(g)) acc += bond_term(spec, x, y).sparse();
    return LatticeOperator(g, std::move(acc));
}

const std::vector<ModelInfo>& model_catalog() {
    static const std::vector<ModelInfo> catalog = {
        {"heisenberg", "", "XX + YY + ZZ nearest-neighbour coupling (d = 2)"},
        {"xy", "", "XX + YY nearest-neighbour coupling (d = 2)"},
        {"emch_radin", "", "ZZ nearest-neighbour coupling (d = 2)"},
        {"exchange", "j, k", "|jk><kj| + |kj><jk| level exchange"},
        {"pair", "j, k", "|jj><kk| + |kk><jj| pair hopping; breaks twist covariance"},
        {"pair_diagonal", "j, k", "|jk><jk| + h.c. diagonal form"},
        {"onsite", "a (d x d Hermitian)", "sum_x a_x, no coupling"},
        {"custom", "on_site, coupling", "user supplied on-site and two-site blocks"},
        {"random_onsite", "count", "seeded random Hermitian on-site terms, no coupling"},
        {"random_coupled", "count", "seeded random Hermitian on-site and two-site terms"},
    };
    return catalog;
}

}  // namespace qlat
