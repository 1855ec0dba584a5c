#pragma once

#include "qrc/common.hpp"
#include "qrc/core/basis.hpp"
#include "qrc/core/evolution.hpp"
#include "qrc/core/spin_operator.hpp"

#include <span>
#include <vector>

namespace qrc {

// Linear map on density matrices in the column-stacking convention:
// vec(A rho B) = (B^T kron A) vec(rho).
class SuperOperator {
  public:
    // Largest vectorized dimension accepted by the eigendecomposition.
    static constexpr Index kMaxVecDim = 2500;

    SuperOperator(BasisPtr basis, CMat matrix);

    static SuperOperator zero(BasisPtr basis);
    // rho -> -i [H, rho]
    static SuperOperator commutator(const SpinOperator& h);
    // rho -> L rho L^dag - 1/2 {L^dag L, rho}
    static SuperOperator dissipator(const SpinOperator& l);
    static SuperOperator lindbladian(const SpinOperator& h, std::span<const JumpOperator> jumps);

    const HilbertBasis& basis() const { return *basis_; }
    const BasisPtr& basis_ptr() const { return basis_; }
    Index hilbert_dim() const { return basis_->dim(); }
    const CMat& matrix() const { return matrix_; }

    CMat apply(const CMat& rho) const;
    double max_norm() const { return max_abs(matrix_); }
    // max over matrix units E_ij of |Tr L(E_ij)|.
    double trace_defect() const;

    SuperOperator operator+(const SuperOperator& other) const;
    SuperOperator operator*(cplx s) const;

  private:
    BasisPtr basis_;
    CMat matrix_;
};

CVec vectorize(const CMat& rho);
CMat unvectorize(const CVec& v, Index d);

struct SuperEigenpair {
    cplx value;
    CMat vector;  // reshaped d x d right eigenvector
};

// Full spectrum (LAPACK zgeev), sorted by real part descending.
std::vector<SuperEigenpair> superop_eigendecomposition(const SuperOperator& s);

// Eigenvalues and right eigenvectors (columns) of a general complex matrix.
void general_eigen(const CMat& a, CVec& values, CMat& vectors, bool want_vectors = true);

}  // namespace qrc
