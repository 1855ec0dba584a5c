#pragma once

#include "qrc/common.hpp"
#include "qrc/core/basis.hpp"

#include <string_view>
#include <variant>

namespace qrc {

// Pure vector or density matrix on a basis. Factories validate the
// normalization invariants; the object is immutable afterwards.
class QuantumState {
  public:
    static constexpr double kNormTol = 1e-10;
    static constexpr double kHermitianTol = 1e-10;
    static constexpr double kEigenTol = 1e-9;

    static QuantumState pure(BasisPtr basis, CVec amplitudes);
    // Normalizes a nonzero vector instead of validating it.
    static QuantumState pure_normalized(BasisPtr basis, CVec amplitudes);
    static QuantumState mixed(BasisPtr basis, CMat rho);
    // Skips the eigenvalue check; callers must have monitored positivity.
    static QuantumState mixed_trusted(BasisPtr basis, CMat rho);
    static QuantumState basis_state(BasisPtr basis, Index i);
    static QuantumState configuration(BasisPtr basis, std::string_view label);

    const HilbertBasis& basis() const { return *basis_; }
    const BasisPtr& basis_ptr() const { return basis_; }
    Index dim() const { return basis_->dim(); }
    bool is_pure() const { return std::holds_alternative<CVec>(repr_); }

    const CVec& amplitudes() const;
    // Density matrix; built from the amplitudes for pure states.
    CMat density() const;
    QuantumState to_mixed() const;
    // Same state expressed in the full basis of the same number of sites.
    QuantumState embedded_in_full() const;

  private:
    QuantumState(BasisPtr basis, CVec v) : basis_(std::move(basis)), repr_(std::move(v)) {}
    QuantumState(BasisPtr basis, CMat m) : basis_(std::move(basis)), repr_(std::move(m)) {}

    BasisPtr basis_;
    std::variant<CVec, CMat> repr_;
};

}  // namespace qrc
