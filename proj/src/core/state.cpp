#include "qrc/core/state.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace qrc {

QuantumState QuantumState::pure(BasisPtr basis, CVec amplitudes) {
    if (amplitudes.size() != basis->dim()) throw DimensionMismatch("QuantumState::pure: wrong vector length");
    const double n2 = amplitudes.squaredNorm();
    if (!(std::abs(n2 - 1.0) <= kNormTol)) {
        throw InvalidArgument("QuantumState::pure: squared norm " + std::to_string(n2) + " differs from 1");
    }
    return QuantumState(std::move(basis), std::move(amplitudes));
}

QuantumState QuantumState::pure_normalized(BasisPtr basis, CVec amplitudes) {
    const double n = amplitudes.norm();
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("QuantumState: cannot normalize vector");
    amplitudes /= n;
    return pure(std::move(basis), std::move(amplitudes));
}

QuantumState QuantumState::mixed(BasisPtr basis, CMat rho) {
    QuantumState s = mixed_trusted(std::move(basis), std::move(rho));
    const auto& m = std::get<CMat>(s.repr_);
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    if (lo < -kEigenTol) {
        throw InvalidArgument("QuantumState::mixed: eigenvalue " + std::to_string(lo) + " below tolerance");
    }
    return s;
}

QuantumState QuantumState::mixed_trusted(BasisPtr basis, CMat rho) {
    const Index d = basis->dim();
    if (rho.rows() != d || rho.cols() != d) throw DimensionMismatch("QuantumState::mixed: wrong matrix size");
    const cplx tr = rho.trace();
    if (!(std::abs(tr - 1.0) <= kNormTol)) {
        throw InvalidArgument("QuantumState::mixed: trace " + std::to_string(tr.real()) + " differs from 1");
    }
    const double herm = max_abs(rho - rho.adjoint());
    if (!(herm <= kHermitianTol)) {
        throw InvalidArgument("QuantumState::mixed: not Hermitian (defect " + std::to_string(herm) + ")");
    }
    return QuantumState(std::move(basis), std::move(rho));
}

QuantumState QuantumState::basis_state(BasisPtr basis, Index i) {
    if (i < 0 || i >= basis->dim()) throw InvalidArgument("QuantumState::basis_state: index out of range");
    CVec v = CVec::Zero(basis->dim());
    v(i) = 1.0;
    return QuantumState(std::move(basis), std::move(v));
}

QuantumState QuantumState::configuration(BasisPtr basis, std::string_view label) {
    const Index i = basis->index_of_label(label);
    return basis_state(std::move(basis), i);
}

const CVec& QuantumState::amplitudes() const {
    if (!is_pure()) throw InvalidArgument("QuantumState: amplitudes requested from a mixed state");
    return std::get<CVec>(repr_);
}

CMat QuantumState::density() const {
    if (is_pure()) {
        const auto& v = std::get<CVec>(repr_);
        return v * v.adjoint();
    }
    return std::get<CMat>(repr_);
}

QuantumState QuantumState::to_mixed() const {
    if (!is_pure()) return *this;
    return QuantumState(basis_, density());
}

QuantumState QuantumState::embedded_in_full() const {
    if (basis_->is_full()) return *this;
    auto full = HilbertBasis::full(basis_->n_sites());
    const Index d = dim();
    std::vector<Index> map(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) map[static_cast<std::size_t>(i)] = static_cast<Index>(basis_->state(i));
    if (is_pure()) {
        CVec v = CVec::Zero(full->dim());
        const auto& a = std::get<CVec>(repr_);
        for (Index i = 0; i < d; ++i) v(map[static_cast<std::size_t>(i)]) = a(i);
        return QuantumState(full, std::move(v));
    }
    CMat m = CMat::Zero(full->dim(), full->dim());
    const auto& r = std::get<CMat>(repr_);
    for (Index j = 0; j < d; ++j) {
        for (Index i = 0; i < d; ++i) m(map[static_cast<std::size_t>(i)], map[static_cast<std::size_t>(j)]) = r(i, j);
    }
    return QuantumState(full, std::move(m));
}

}  // namespace qrc
