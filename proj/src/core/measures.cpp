#include "qrc/core/measures.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace qrc {

namespace {

constexpr double kEntropyCutoff = 1e-12;
constexpr double kPsdTol = 1e-8;
// Round-off eigenvalues of rank-deficient inputs; their square roots would
// otherwise leak ~1e-8 into the fidelity.
constexpr double kZeroEigen = 1e-13;

std::vector<int> normalized_sites(std::vector<int> sites, int n_sites, const char* where) {
    if (sites.empty()) throw InvalidArgument(std::string(where) + ": empty site set");
    std::sort(sites.begin(), sites.end());
    sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
    if (sites.front() < 0 || sites.back() >= n_sites) {
        throw InvalidArgument(std::string(where) + ": site out of range");
    }
    return sites;
}

// Maps a full-basis index to (kept index, traced index).
struct SiteSplit {
    std::vector<int> keep;
    std::vector<int> rest;
    int n;

    SiteSplit(int n_sites, const std::vector<int>& k) : keep(k), n(n_sites) {
        for (int s = 0; s < n_sites; ++s) {
            if (!std::binary_search(keep.begin(), keep.end(), s)) rest.push_back(s);
        }
    }

    static Index gather(Index full, const std::vector<int>& sites, int n) {
        Index out = 0;
        for (int s : sites) out = (out << 1) | ((full >> (n - 1 - s)) & 1);
        return out;
    }

    Index kept(Index full) const { return gather(full, keep, n); }
    Index traced(Index full) const { return gather(full, rest, n); }
};

}  // namespace

cplx expectation(const QuantumState& state, const SpinOperator& op) {
    require_same_basis(state.basis(), op.basis(), "expectation");
    cplx value;
    if (state.is_pure()) {
        const CVec& psi = state.amplitudes();
        value = psi.dot(op.apply(psi));
    } else {
        value = op.left_multiply(state.density()).trace();
    }
    if (op.hermitian_hint()) {
        if (std::abs(value.imag()) > 1e-8) {
            throw NumericalError("expectation: imaginary residue " + std::to_string(value.imag()) +
                                 " for a Hermitian operator");
        }
        value = cplx(value.real(), 0.0);
    }
    return value;
}

double expectation_real(const QuantumState& state, const SpinOperator& op) { return expectation(state, op).real(); }

CMat partial_trace_matrix(const CMat& rho, int n_sites, std::vector<int> keep) {
    keep = normalized_sites(std::move(keep), n_sites, "partial_trace");
    const Index d = Index{1} << n_sites;
    if (rho.rows() != d || rho.cols() != d) throw DimensionMismatch("partial_trace: matrix is not full-basis");
    const SiteSplit split(n_sites, keep);
    const Index dk = Index{1} << keep.size();
    std::vector<Index> kept(static_cast<std::size_t>(d)), traced(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) {
        kept[static_cast<std::size_t>(i)] = split.kept(i);
        traced[static_cast<std::size_t>(i)] = split.traced(i);
    }
    CMat out = CMat::Zero(dk, dk);
    for (Index j = 0; j < d; ++j) {
        const Index tj = traced[static_cast<std::size_t>(j)];
        const Index kj = kept[static_cast<std::size_t>(j)];
        for (Index i = 0; i < d; ++i) {
            if (traced[static_cast<std::size_t>(i)] == tj) out(kept[static_cast<std::size_t>(i)], kj) += rho(i, j);
        }
    }
    return out;
}

QuantumState partial_trace(const QuantumState& state, std::vector<int> keep) {
    const QuantumState full = state.embedded_in_full();
    const int n = full.basis().n_sites();
    keep = normalized_sites(std::move(keep), n, "partial_trace");
    CMat reduced = partial_trace_matrix(full.density(), n, keep);
    reduced = hermitian_part(reduced);
    return QuantumState::mixed_trusted(HilbertBasis::full(static_cast<int>(keep.size())), std::move(reduced));
}

double von_neumann_entropy(const CMat& rho) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(rho), Eigen::EigenvaluesOnly);
    double s = 0.0;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double p = es.eigenvalues()(i);
        if (p > kEntropyCutoff) s -= p * std::log(p);
    }
    return s;
}

double entanglement_entropy(const QuantumState& state, const std::vector<int>& subsystem) {
    if (!state.is_pure()) throw InvalidArgument("entanglement_entropy: global state must be pure");
    const QuantumState full = state.embedded_in_full();
    const int n = full.basis().n_sites();
    const auto keep = normalized_sites(subsystem, n, "entanglement_entropy");
    const SiteSplit split(n, keep);
    const Index dk = Index{1} << keep.size();
    const Index dr = Index{1} << split.rest.size();
    if (dr == 1) return 0.0;
    CMat m = CMat::Zero(dk, dr);
    const CVec& psi = full.amplitudes();
    for (Index i = 0; i < psi.size(); ++i) m(split.kept(i), split.traced(i)) = psi(i);
    Eigen::BDCSVD<CMat> svd(m);
    double s = 0.0;
    for (Index k = 0; k < svd.singularValues().size(); ++k) {
        const double p = svd.singularValues()(k) * svd.singularValues()(k);
        if (p > kEntropyCutoff) s -= p * std::log(p);
    }
    return s;
}

double subsystem_entropy(const QuantumState& state, const std::vector<int>& subsystem) {
    if (state.is_pure()) return entanglement_entropy(state, subsystem);
    return von_neumann_entropy(partial_trace(state, subsystem).density());
}

namespace {

CMat psd_sqrt(const CMat& a) {
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(a));
    RVec ev = es.eigenvalues();
    if (ev.minCoeff() < -kPsdTol) {
        throw NumericalError("state_fidelity: input has eigenvalue " + std::to_string(ev.minCoeff()));
    }
    for (Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) > kZeroEigen ? std::sqrt(ev(i)) : 0.0;
    return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

double state_fidelity(const QuantumState& a, const QuantumState& b) {
    require_same_basis(a.basis(), b.basis(), "state_fidelity");
    const CMat sa = psd_sqrt(a.density());
    // Validates b as well.
    (void)psd_sqrt(b.density());
    const CMat m = sa * b.density() * sa;
    Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m), Eigen::EigenvaluesOnly);
    double tr = 0.0;
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double l = es.eigenvalues()(i);
        if (l < -kPsdTol) throw NumericalError("state_fidelity: sqrt(a) b sqrt(a) is not PSD");
        if (l > kZeroEigen) tr += std::sqrt(l);
    }
    const double f = tr * tr;
    if (f > 1.0 + kPsdTol || f < -kPsdTol) {
        throw NumericalError("state_fidelity: value " + std::to_string(f) + " outside [0,1]");
    }
    return std::clamp(f, 0.0, 1.0);
}

Eigen::Matrix2cd single_site_density(const HilbertBasis& basis, const CMat& rho, int site) {
    const auto mask = basis.site_mask(site);
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (Index i = 0; i < basis.dim(); ++i) {
        const auto bits = basis.state(i);
        if (bits & mask) {
            out(1, 1) += rho(i, i);
            const auto j = basis.index_of(bits ^ mask);
            if (j) out(1, 0) += rho(i, *j);
        } else {
            out(0, 0) += rho(i, i);
        }
    }
    out(0, 1) = std::conj(out(1, 0));
    return out;
}

Eigen::Matrix2cd single_site_density(const HilbertBasis& basis, const CVec& psi, int site) {
    const auto mask = basis.site_mask(site);
    Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
    for (Index i = 0; i < basis.dim(); ++i) {
        const auto bits = basis.state(i);
        if (bits & mask) {
            out(1, 1) += std::norm(psi(i));
            const auto j = basis.index_of(bits ^ mask);
            if (j) out(1, 0) += psi(i) * std::conj(psi(*j));
        } else {
            out(0, 0) += std::norm(psi(i));
        }
    }
    out(0, 1) = std::conj(out(1, 0));
    return out;
}

namespace {

std::array<double, 3> bloch_from(const Eigen::Matrix2cd& r) {
    return {2.0 * r(1, 0).real(), -2.0 * r(1, 0).imag(), (r(1, 1) - r(0, 0)).real()};
}

}  // namespace

std::array<double, 3> bloch_vector(const HilbertBasis& basis, const CMat& rho, int site) {
    return bloch_from(single_site_density(basis, rho, site));
}

std::array<double, 3> bloch_vector(const HilbertBasis& basis, const CVec& psi, int site) {
    return bloch_from(single_site_density(basis, psi, site));
}

}  // namespace qrc
