#include "qrc/core/superoperator.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <lapacke.h>

#include <algorithm>
#include <numeric>

namespace qrc {

SuperOperator::SuperOperator(BasisPtr basis, CMat matrix) : basis_(std::move(basis)), matrix_(std::move(matrix)) {
    const Index d = basis_->dim();
    if (matrix_.rows() != d * d || matrix_.cols() != d * d) {
        throw DimensionMismatch("SuperOperator: matrix must be d^2 x d^2");
    }
}

SuperOperator SuperOperator::zero(BasisPtr basis) {
    const Index d2 = basis->dim() * basis->dim();
    return SuperOperator(std::move(basis), CMat::Zero(d2, d2));
}

SuperOperator SuperOperator::commutator(const SpinOperator& h) {
    const Index d = h.dim();
    const CMat hd = h.dense();
    const CMat id = CMat::Identity(d, d);
    CMat m = -kI * (CMat(Eigen::kroneckerProduct(id, hd)) - CMat(Eigen::kroneckerProduct(hd.transpose(), id)));
    return SuperOperator(h.basis_ptr(), std::move(m));
}

SuperOperator SuperOperator::dissipator(const SpinOperator& l) {
    const Index d = l.dim();
    const CMat ld = l.dense();
    const CMat k = ld.adjoint() * ld;
    const CMat id = CMat::Identity(d, d);
    CMat m = CMat(Eigen::kroneckerProduct(ld.conjugate(), ld)) -
             0.5 * (CMat(Eigen::kroneckerProduct(id, k)) + CMat(Eigen::kroneckerProduct(k.transpose(), id)));
    return SuperOperator(l.basis_ptr(), std::move(m));
}

SuperOperator SuperOperator::lindbladian(const SpinOperator& h, std::span<const JumpOperator> jumps) {
    SuperOperator out = commutator(h);
    for (const auto& j : jumps) out = out + dissipator(j.op());
    return out;
}

CVec vectorize(const CMat& rho) { return Eigen::Map<const CVec>(rho.data(), rho.size()); }

CMat unvectorize(const CVec& v, Index d) {
    if (v.size() != d * d) throw DimensionMismatch("unvectorize: length is not d^2");
    return Eigen::Map<const CMat>(v.data(), d, d);
}

CMat SuperOperator::apply(const CMat& rho) const {
    const Index d = hilbert_dim();
    if (rho.rows() != d || rho.cols() != d) throw DimensionMismatch("SuperOperator::apply: wrong matrix size");
    return unvectorize(matrix_ * vectorize(rho), d);
}

double SuperOperator::trace_defect() const {
    const Index d = hilbert_dim();
    // Tr L(E) as a row functional: sum of rows s + s*d.
    CVec row = CVec::Zero(matrix_.cols());
    for (Index s = 0; s < d; ++s) row += matrix_.row(s + s * d).transpose();
    return row.cwiseAbs().maxCoeff();
}

SuperOperator SuperOperator::operator+(const SuperOperator& other) const {
    require_same_basis(*basis_, *other.basis_, "SuperOperator::operator+");
    return SuperOperator(basis_, matrix_ + other.matrix_);
}

SuperOperator SuperOperator::operator*(cplx s) const { return SuperOperator(basis_, matrix_ * s); }

void general_eigen(const CMat& a, CVec& values, CMat& vectors, bool want_vectors) {
    const Index n = a.rows();
    if (a.cols() != n) throw DimensionMismatch("general_eigen: matrix must be square");
    CMat work = a;
    values.resize(n);
    vectors.resize(want_vectors ? n : 1, want_vectors ? n : 1);
    auto* pa = reinterpret_cast<lapack_complex_double*>(work.data());
    auto* pw = reinterpret_cast<lapack_complex_double*>(values.data());
    auto* pv = reinterpret_cast<lapack_complex_double*>(vectors.data());
    const lapack_int ni = static_cast<lapack_int>(n);
    const lapack_int info = LAPACKE_zgeev(LAPACK_COL_MAJOR, 'N', want_vectors ? 'V' : 'N', ni, pa, ni, pw, nullptr,
                                          1, pv, want_vectors ? ni : 1);
    if (info != 0) throw NumericalError("general_eigen: zgeev failed with info " + std::to_string(info));
}

std::vector<SuperEigenpair> superop_eigendecomposition(const SuperOperator& s) {
    const Index n = s.matrix().rows();
    if (n > SuperOperator::kMaxVecDim) {
        throw InvalidArgument("superop_eigendecomposition: vectorized dimension " + std::to_string(n) +
                              " exceeds cap " + std::to_string(SuperOperator::kMaxVecDim));
    }
    CVec values;
    CMat vectors;
    general_eigen(s.matrix(), values, vectors, true);
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return values(a).real() > values(b).real(); });
    std::vector<SuperEigenpair> out;
    out.reserve(order.size());
    const Index d = s.hilbert_dim();
    for (Index k : order) out.push_back({values(k), unvectorize(vectors.col(k), d)});
    return out;
}

}  // namespace qrc
