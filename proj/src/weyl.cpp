#include "qlat/weyl.hpp"

#include <cmath>
#include <string>

namespace qlat {

namespace {

int mod(long long a, int d) {
    long long r = a % d;
    return static_cast<int>(r < 0 ? r + d : r);
}

void check_dim(int d) {
    if (d < 2) fail("weyl: site dimension must be >= 2, got " + std::to_string(d));
}

void check_same(const WeylIndex& a, const WeylIndex& b) {
    if (a.d != b.d)
        fail("weyl: dimension mismatch (" + std::to_string(a.d) + " vs " + std::to_string(b.d) + ")");
}

}  // namespace

WeylIndex::WeylIndex(int r1_, int r2_, int d_) : d(d_) {
    check_dim(d_);
    r1 = mod(r1_, d_);
    r2 = mod(r2_, d_);
}

WeylIndex WeylIndex::operator+(const WeylIndex& o) const {
    check_same(*this, o);
    return {r1 + o.r1, r2 + o.r2, d};
}

WeylIndex WeylIndex::operator-() const { return {-r1, -r2, d}; }

PhasedWeyl::PhasedWeyl(WeylIndex idx, int phase_exponent)
    : index(idx), phase(mod(phase_exponent, idx.d)) {}

cplx root_of_unity(int k, int d) {
    check_dim(d);
    const int m = mod(k, d);
    if (m == 0) return {1.0, 0.0};
    if (2 * m == d) return {-1.0, 0.0};
    if (4 * m == d) return {0.0, 1.0};
    if (4 * m == 3 * d) return {0.0, -1.0};
    const double angle = 2.0 * kPi * m / d;
    return {std::cos(angle), std::sin(angle)};
}

Matrix shift_matrix(int d) {
    check_dim(d);
    Matrix x = Matrix::Zero(d, d);
    for (int s = 0; s < d; ++s) x((s + 1) % d, s) = 1.0;
    return x;
}

Matrix clock_matrix(int d) {
    check_dim(d);
    Matrix z = Matrix::Zero(d, d);
    for (int s = 0; s < d; ++s) z(s, s) = root_of_unity(s, d);
    return z;
}

Matrix weyl_matrix(const WeylIndex& idx) {
    check_dim(idx.d);
    const int d = idx.d;
    // X^{r1} Z^{r2} |s> = w^{r2 s} |s + r1>
    Matrix u = Matrix::Zero(d, d);
    for (int s = 0; s < d; ++s)
        u(mod(s + idx.r1, d), s) = root_of_unity(idx.r2 * s, d);
    return u;
}

Matrix weyl_matrix(const PhasedWeyl& w) {
    return root_of_unity(w.phase, w.index.d) * weyl_matrix(w.index);
}

PhasedWeyl weyl_product(const PhasedWeyl& a, const PhasedWeyl& b) {
    check_same(a.index, b.index);
    const int d = a.index.d;
    const long long extra = static_cast<long long>(b.index.r1) * a.index.r2;
    return {a.index + b.index, mod(a.phase + b.phase + extra, d)};
}

int commutation_phase(const WeylIndex& a, const WeylIndex& b) {
    check_same(a, b);
    const long long c = static_cast<long long>(b.r1) * a.r2 - static_cast<long long>(a.r1) * b.r2;
    return mod(c, a.d);
}

std::vector<WeylIndex> all_weyl_indices(int d) {
    check_dim(d);
    std::vector<WeylIndex> out;
    out.reserve(static_cast<std::size_t>(d) * d);
    for (int r1 = 0; r1 < d; ++r1)
        for (int r2 = 0; r2 < d; ++r2) out.emplace_back(r1, r2, d);
    return out;
}

std::vector<WeylIndex> joint_commutant_indices(const std::vector<WeylIndex>& against) {
    if (against.empty()) fail("joint_commutant_indices: empty index set");
    const int d = against.front().d;
    std::vector<WeylIndex> out;
    for (const auto& s : all_weyl_indices(d)) {
        bool fixed = true;
        for (const auto& r : against) {
            if (commutation_phase(r, s) != 0) {
                fixed = false;
                break;
            }
        }
        if (fixed) out.push_back(s);
    }
    return out;
}

}  // namespace qlat
