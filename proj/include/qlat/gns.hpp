#pragma once

// Tracial GNS representation in vectorized form.
//
// A GNS vector is a chain operator B with <B|C> = tr(B^dag C) / d^L, the
// cyclic vector Omega is the identity, Pi(A) is left multiplication and the
// modular conjugation is J|B> = |B^dag>, so JAJ acts as right
// multiplication by A^dag.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qlat/lattice.hpp"
#include "qlat/weyl.hpp"

namespace qlat {

class GnsVector {
public:
    explicit GnsVector(LatticeOperator payload) : payload_(std::move(payload)) {}
    static GnsVector omega(const ChainGeometry& geom) { return GnsVector(LatticeOperator::identity(geom)); }

    const LatticeOperator& payload() const { return payload_; }
    const ChainGeometry& geometry() const { return payload_.geometry(); }

    cplx inner(const GnsVector& other) const;
    double norm() const { return payload_.hs_norm(); }

    friend GnsVector operator+(const GnsVector& a, const GnsVector& b) { return GnsVector(a.payload_ + b.payload_); }
    friend GnsVector operator-(const GnsVector& a, const GnsVector& b) { return GnsVector(a.payload_ - b.payload_); }
    friend GnsVector operator*(cplx s, const GnsVector& a) { return GnsVector(s * a.payload_); }

private:
    LatticeOperator payload_;
};

// J|B> = |B^dag>.
GnsVector modular_conjugation(const GnsVector& v);

// <Omega|Pi(A)|Omega> = tr(A) / d^L.
cplx tracial_state(const LatticeOperator& a);

// A linear map on GNS vectors, kept as a structural expression and
// materialized as a d^{2L} x d^{2L} matrix only on request. The vectorized
// basis is column-major: vec(B)[i + j*D] = B(i, j).
class DoubledOperator {
public:
    struct Node;

    static DoubledOperator identity(const ChainGeometry& geom);
    static DoubledOperator zero(const ChainGeometry& geom);
    static DoubledOperator left(const LatticeOperator& a);
    static DoubledOperator right(const LatticeOperator& a);
    // Superoperator acting on site x only: `local` is a d^2 x d^2 matrix on
    // the vectorized site-x operator space, tensored with identity elsewhere.
    static DoubledOperator site_map(int x, const Matrix& local, const ChainGeometry& geom);
    // B -> [H, B].
    static DoubledOperator commutator(const LatticeOperator& h);
    static DoubledOperator explicit_matrix(const ChainGeometry& geom, Matrix m);
    static DoubledOperator function(const ChainGeometry& geom, std::function<Matrix(const Matrix&)> f,
                                    std::string label);

    const ChainGeometry& geometry() const;
    std::string describe() const;

    GnsVector apply(const GnsVector& v) const;
    // Raw action on a dense D x D operator.
    Matrix apply(const Matrix& b) const;

    // Explicit matrix; throws SizeCap when d^{2L} > cap.
    Matrix to_matrix(std::int64_t cap = 4096) const;

    DoubledOperator adjoint() const;

    // (a * b)|v> = a(b|v>)
    friend DoubledOperator operator*(const DoubledOperator& a, const DoubledOperator& b);
    friend DoubledOperator operator+(const DoubledOperator& a, const DoubledOperator& b);
    friend DoubledOperator operator-(const DoubledOperator& a, const DoubledOperator& b);
    friend DoubledOperator operator*(cplx s, const DoubledOperator& a);

private:
    explicit DoubledOperator(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

DoubledOperator pi(const LatticeOperator& a);
// JAJ: right multiplication by A^dag.
DoubledOperator j_conjugate(const LatticeOperator& a);

// Rank-one projector onto the maximally entangled vector at site x, i.e.
// P|B> = |E_x(B)>.
DoubledOperator entangled_projector(int x, const ChainGeometry& geom);
Matrix entangled_projector_local(int d);

struct SpectralProjector {
    int exponent = 0;   // eigenvalue = exp(2 pi i exponent / d)
    cplx eigenvalue;
    int rank = 0;       // rank of the site-local part
    Matrix local;       // d^2 x d^2 projector on the site-x operator space
    DoubledOperator projector;
};

// Spectral projectors of Pi(U_r) J U_r J, i.e. B -> U_r B U_r^dag at site x,
// from a numerical eigendecomposition of the site-local d^2 x d^2 unitary.
std::vector<SpectralProjector> weyl_pair_projectors(const WeylIndex& r, int x, const ChainGeometry& geom);

// Product of the eigenvalue-1 projectors over all nontrivial Weyl indices
// (they commute), as a site-local matrix.
Matrix joint_fixed_projector_local(int d);

// Hamiltonian adjoint action B -> HB - BH; requires H self-adjoint.
DoubledOperator adjoint_generator(const LatticeOperator& h, double tol = 1e-10);

// Max-abs deviation of H from H^dag.
double hermiticity_defect(const LatticeOperator& h);

}  // namespace qlat
