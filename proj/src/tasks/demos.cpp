#include "qrc/tasks/demos.hpp"

#include "qrc/core/basis.hpp"
#include "qrc/core/evolution.hpp"
#include "qrc/core/spin_operator.hpp"
#include "qrc/rydberg/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

namespace qrc {

namespace {

void check_spin(int s, const char* what) {
    if (s != 1 && s != -1) throw InvalidArgument(std::string(what) + ": spins must be +1 or -1");
}

// Product state from per-site (g, r) amplitudes.
CVec product_state(const HilbertBasis& b, const std::vector<std::array<cplx, 2>>& sites) {
    CVec v(b.dim());
    for (Index i = 0; i < b.dim(); ++i) {
        cplx a = 1.0;
        for (int s = 0; s < b.n_sites(); ++s) a *= sites[static_cast<std::size_t>(s)][b.excited(i, s) ? 1 : 0];
        v(i) = a;
    }
    return v;
}

std::array<cplx, 2> spin_state(int s) {
    return s > 0 ? std::array<cplx, 2>{0.0, 1.0} : std::array<cplx, 2>{1.0, 0.0};
}

}  // namespace

XorOutcome xor_demo(double j_over_omega, int s1, int s2, double omega, double t) {
    check_spin(s1, "xor_demo");
    check_spin(s2, "xor_demo");
    if (!(omega > 0.0)) throw InvalidArgument("xor_demo: omega must be positive");
    if (t < 0.0) t = kPi / omega;
    const auto b = HilbertBasis::full(3);
    RMat j = RMat::Zero(3, 3);
    j(0, 2) = j(2, 0) = j(1, 2) = j(2, 1) = j_over_omega * omega;
    const SpinOperator h = qrnn_hamiltonian(j, omega, {0.0, 0.0, 0.0}, b);
    const CVec psi0 = product_state(*b, {spin_state(s1), spin_state(s2), spin_state(-1)});
    const CVec psi = unitary_propagator(h, t) * psi0;
    XorOutcome out;
    for (Index i = 0; i < b->dim(); ++i) {
        if (b->excited(i, 2)) out.p_plus += std::norm(psi(i));
    }
    out.decision = out.p_plus > 0.5 ? 1 : -1;
    return out;
}

std::string to_string(ZErrorSite s) {
    switch (s) {
        case ZErrorSite::none: return "none";
        case ZErrorSite::l1: return "L1";
        case ZErrorSite::l2: return "L2";
        case ZErrorSite::l3: return "L3";
    }
    return "?";
}

ZErrorSite diagnose(int a1, int a2) {
    if (a1 > 0 && a2 > 0) return ZErrorSite::none;
    if (a1 < 0 && a2 > 0) return ZErrorSite::l1;
    if (a1 < 0 && a2 < 0) return ZErrorSite::l2;
    return ZErrorSite::l3;
}

ZErrorOutcome z_error_demo(std::optional<int> error_site, cplx a, cplx b, double j_over_omega, double omega) {
    if (error_site && (*error_site < 0 || *error_site > 2)) throw InvalidArgument("z_error_demo: error site must be 0, 1 or 2");
    const double norm = std::sqrt(std::norm(a) + std::norm(b));
    if (norm == 0.0) throw InvalidArgument("z_error_demo: zero logical state");
    a /= norm;
    b /= norm;

    const auto basis = HilbertBasis::full(5);
    const double r = 1.0 / std::sqrt(2.0);
    const std::array<cplx, 2> minus_y{r, cplx(0.0, -r)}, plus_y{r, cplx(0.0, r)}, up{0.0, 1.0};
    CVec psi = a * product_state(*basis, {minus_y, minus_y, minus_y, up, up}) +
               b * product_state(*basis, {plus_y, plus_y, plus_y, up, up});
    if (error_site) psi = build_pauli(basis, *error_site, Axis::z).apply(psi);

    SpinOperator rot = SpinOperator::zero(basis);
    for (int s = 0; s < 3; ++s) rot = rot + build_pauli(basis, s, Axis::x) * (0.5 * omega);
    psi = unitary_propagator(rot.as_hermitian(), kPi / (2.0 * omega)) * psi;

    const double j = j_over_omega * omega;
    auto zz = [&](int p, int q) { return build_pauli(basis, p, Axis::z) * build_pauli(basis, q, Axis::z); };
    SpinOperator parity = (zz(0, 3) + zz(1, 3) + zz(1, 4) + zz(2, 4)) * j +
                          (build_pauli(basis, 3, Axis::x) + build_pauli(basis, 4, Axis::x)) * (0.5 * omega);
    psi = unitary_propagator(parity.as_hermitian(), kPi / omega) * psi;

    ZErrorOutcome out;
    for (Index i = 0; i < basis->dim(); ++i) {
        const int k = (basis->excited(i, 3) ? 0 : 2) + (basis->excited(i, 4) ? 0 : 1);
        out.joint[static_cast<std::size_t>(k)] += std::norm(psi(i));
    }
    const auto best = std::max_element(out.joint.begin(), out.joint.end());
    const int k = static_cast<int>(best - out.joint.begin());
    out.a1 = k < 2 ? 1 : -1;
    out.a2 = k % 2 == 0 ? 1 : -1;
    out.probability = *best;
    out.diagnosis = diagnose(out.a1, out.a2);
    return out;
}

}  // namespace qrc
