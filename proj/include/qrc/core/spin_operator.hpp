#pragma once

#include "qrc/common.hpp"
#include "qrc/core/basis.hpp"

#include <variant>
#include <vector>

namespace qrc {

enum class Axis { x, y, z };

// Operator on a HilbertBasis. Storage is dense below kDenseLimit and
// compressed sparse at or above it; all arithmetic re-normalizes the storage.
class SpinOperator {
  public:
    static constexpr Index kDenseLimit = 256;
    static constexpr double kHermitianTol = 1e-10;

    SpinOperator(BasisPtr basis, const CMat& matrix, bool hermitian_hint = false);
    SpinOperator(BasisPtr basis, const SpMat& matrix, bool hermitian_hint = false);

    static SpinOperator zero(BasisPtr basis);
    static SpinOperator identity(BasisPtr basis);
    static SpinOperator diagonal(BasisPtr basis, const RVec& diag);
    static SpinOperator from_triplets(BasisPtr basis, const std::vector<Eigen::Triplet<cplx>>& triplets,
                                      bool hermitian_hint = false);

    const HilbertBasis& basis() const { return *basis_; }
    const BasisPtr& basis_ptr() const { return basis_; }
    Index dim() const { return basis_->dim(); }
    bool hermitian_hint() const { return hermitian_; }
    bool is_dense() const { return std::holds_alternative<CMat>(storage_); }

    CMat dense() const;
    SpMat sparse() const;
    cplx coeff(Index row, Index col) const;

    CVec apply(const CVec& v) const;
    CMat left_multiply(const CMat& m) const;   // this * m
    CMat right_multiply(const CMat& m) const;  // m * this

    SpinOperator adjoint() const;
    double max_norm() const;
    // Largest |A_ij - conj(A_ji)|.
    double hermiticity_defect() const;

    SpinOperator operator+(const SpinOperator& other) const;
    SpinOperator operator-(const SpinOperator& other) const;
    SpinOperator operator*(const SpinOperator& other) const;
    SpinOperator operator*(double s) const;
    SpinOperator operator*(cplx s) const;
    friend SpinOperator operator*(double s, const SpinOperator& a) { return a * s; }
    friend SpinOperator operator*(cplx s, const SpinOperator& a) { return a * s; }

    // Re-flags the result as Hermitian after validation.
    SpinOperator as_hermitian() const;

  private:
    void normalize_storage();
    void validate() const;

    BasisPtr basis_;
    std::variant<CMat, SpMat> storage_;
    bool hermitian_ = false;
};

// sigma^axis on one site. For blockaded bases, x/y are the blockade-projected
// matrix elements (transitions leaving the basis are dropped).
SpinOperator build_pauli(BasisPtr basis, int site, Axis axis);
// n = (sigma^z + 1)/2, the Rydberg occupation of one site.
SpinOperator number_operator(BasisPtr basis, int site);
// Total excitation number.
SpinOperator total_number_operator(BasisPtr basis);
// |g><g| on one site.
SpinOperator ground_projector(BasisPtr basis, int site);
// sigma^- = |g><r| on one site.
SpinOperator lowering_operator(BasisPtr basis, int site);

Axis parse_axis(char c);

}  // namespace qrc
