#pragma once

#include "qrc/common.hpp"
#include "qrc/core/spin_operator.hpp"
#include "qrc/core/state.hpp"

#include <array>
#include <vector>

namespace qrc {

// <A> = Tr(A rho). Returns the real part for Hermitian-flagged operators and
// throws when the imaginary residue exceeds 1e-8.
cplx expectation(const QuantumState& state, const SpinOperator& op);
double expectation_real(const QuantumState& state, const SpinOperator& op);

// Reduced density matrix on `keep` (sorted, unique). Blockaded states are
// embedded into the full basis first.
QuantumState partial_trace(const QuantumState& state, std::vector<int> keep);
CMat partial_trace_matrix(const CMat& rho_full, int n_sites, std::vector<int> keep);

// -Tr(rho ln rho) in nats; eigenvalues below 1e-12 are dropped.
double von_neumann_entropy(const CMat& rho);
// Entropy of the reduction of a pure global state.
double entanglement_entropy(const QuantumState& state, const std::vector<int>& subsystem);
// Entropy of the reduction of any global state (pure or mixed).
double subsystem_entropy(const QuantumState& state, const std::vector<int>& subsystem);

// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2.
double state_fidelity(const QuantumState& a, const QuantumState& b);

// (<sigma^x>, <sigma^y>, <sigma^z>) of one site straight from the density
// matrix or vector, without building operators.
std::array<double, 3> bloch_vector(const HilbertBasis& basis, const CMat& rho, int site);
std::array<double, 3> bloch_vector(const HilbertBasis& basis, const CVec& psi, int site);
// Single-site reduced density matrix (2x2, order g, r).
Eigen::Matrix2cd single_site_density(const HilbertBasis& basis, const CMat& rho, int site);
Eigen::Matrix2cd single_site_density(const HilbertBasis& basis, const CVec& psi, int site);

}  // namespace qrc
