#include "qrc/rydberg/hamiltonian.hpp"

#include <cmath>

namespace qrc {

namespace {

using Triplets = std::vector<Eigen::Triplet<cplx>>;

void check_site_vector(const std::vector<double>& v, int n, const char* where) {
    if (static_cast<int>(v.size()) != n) throw DimensionMismatch(std::string(where) + ": expected one value per site");
}

void check_pair_matrix(const RMat& m, int n, const char* where) {
    if (m.rows() != n || m.cols() != n) throw DimensionMismatch(std::string(where) + ": coupling matrix size");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
        throw InvalidArgument(std::string(where) + ": coupling matrix not symmetric");
    }
}

// Off-diagonal sum_n sx_n, restricted to the basis.
void append_sx_sum(const HilbertBasis& basis, double scale, Triplets& t) {
    if (scale == 0.0) return;
    for (Index i = 0; i < basis.dim(); ++i) {
        for (int s = 0; s < basis.n_sites(); ++s) {
            if (auto j = basis.index_of(basis.state(i) ^ basis.site_mask(s))) t.emplace_back(*j, i, scale);
        }
    }
}

SpinOperator assemble(BasisPtr basis, const RVec& diag, double omega) {
    Triplets t;
    for (Index i = 0; i < diag.size(); ++i) {
        if (diag(i) != 0.0) t.emplace_back(i, i, diag(i));
    }
    append_sx_sum(*basis, 0.5 * omega, t);
    return SpinOperator::from_triplets(std::move(basis), t, true);
}

OperatorSchedule schedule_from(const DriveProfile& drive, int n,
                               const std::function<SpinOperator(const DriveSegment&)>& build) {
    drive.validate(n);
    std::vector<double> starts;
    std::vector<SpinOperator> ops;
    for (const auto& seg : drive.segments()) {
        starts.push_back(seg.start);
        ops.push_back(build(seg));
    }
    return OperatorSchedule::piecewise(std::move(starts), std::move(ops));
}

}  // namespace

DriveProfile::DriveProfile(std::vector<DriveSegment> segments) : segments_(std::move(segments)) {}

DriveProfile DriveProfile::constant(double duration, double omega, std::vector<double> detunings) {
    return DriveProfile({DriveSegment{0.0, duration, omega, std::move(detunings)}});
}

DriveProfile& DriveProfile::then(double length, double omega, std::vector<double> detunings) {
    if (!(length > 0.0)) throw InvalidArgument("DriveProfile::then: segment length must be positive");
    const double start = duration();
    segments_.push_back(DriveSegment{start, start + length, omega, std::move(detunings)});
    return *this;
}

void DriveProfile::validate(int n_sites) const {
    if (segments_.empty()) throw InvalidArgument("DriveProfile: no segments");
    double t = 0.0;
    for (const auto& seg : segments_) {
        if (seg.start != t) throw InvalidArgument("DriveProfile: segments must be contiguous from t = 0");
        if (!(seg.end > seg.start)) throw InvalidArgument("DriveProfile: empty or reversed segment");
        check_site_vector(seg.detunings, n_sites, "DriveProfile");
        t = seg.end;
    }
}

void DissipationSpec::validate() const {
    if (gamma < 0.0) throw InvalidArgument("DissipationSpec: gamma must be >= 0");
    if (alpha < 0.0 || alpha > 1.0 || beta < 0.0 || beta > 1.0) {
        throw InvalidArgument("DissipationSpec: alpha and beta must lie in [0, 1]");
    }
}

SpinOperator qrnn_hamiltonian(const RMat& j, double omega, const std::vector<double>& detunings, BasisPtr basis) {
    const int n = basis->n_sites();
    check_pair_matrix(j, n, "qrnn_hamiltonian");
    check_site_vector(detunings, n, "qrnn_hamiltonian");
    RVec diag = RVec::Zero(basis->dim());
    for (Index i = 0; i < basis->dim(); ++i) {
        double e = 0.0;
        for (int a = 0; a < n; ++a) {
            const int sa = basis->spin(i, a);
            e -= detunings[static_cast<std::size_t>(a)] * sa;
            for (int b = a + 1; b < n; ++b) e += j(a, b) * sa * basis->spin(i, b);
        }
        diag(i) = e;
    }
    return assemble(std::move(basis), diag, omega);
}

OperatorSchedule build_qrnn_hamiltonian(const RMat& j, const DriveProfile& drive, BasisPtr basis) {
    return schedule_from(drive, basis->n_sites(),
                         [&](const DriveSegment& s) { return qrnn_hamiltonian(j, s.omega, s.detunings, basis); });
}

SpinOperator rydberg_hamiltonian(const RMat& v, double omega, const std::vector<double>& detunings, BasisPtr basis) {
    RydbergModel model(basis, v);
    return model.hamiltonian_op(omega, detunings);
}

OperatorSchedule build_rydberg_hamiltonian(const RydbergGeometry& g, const InteractionTable& table,
                                           const DriveProfile& drive, BasisPtr basis) {
    if (g.size() != basis->n_sites()) throw DimensionMismatch("build_rydberg_hamiltonian: geometry size");
    const RydbergModel model(basis, interaction_matrix(g, table));
    return schedule_from(drive, basis->n_sites(),
                         [&](const DriveSegment& s) { return model.hamiltonian_op(s.omega, s.detunings); });
}

std::vector<JumpOperator> effective_jumps(BasisPtr basis, const DissipationSpec& d, JumpMode mode) {
    d.validate();
    std::vector<JumpOperator> out;
    if (d.gamma == 0.0) return out;
    const double rate = std::sqrt(d.gamma);
    for (int s = 0; s < basis->n_sites(); ++s) {
        const SpinOperator lower = lowering_operator(basis, s);
        const SpinOperator ground = ground_projector(basis, s);
        if (mode == JumpMode::coherent) {
            out.emplace_back(lower * (rate * d.alpha) + ground * (rate * d.beta));
            continue;
        }
        if (d.alpha > 0.0) out.emplace_back(lower * (rate * d.alpha));
        if (d.beta > 0.0) out.emplace_back(ground * (rate * d.beta));
    }
    return out;
}

SpinOperator pxp_hamiltonian(BasisPtr basis, double omega) {
    if (basis->kind() != BasisKind::blockaded_ring) throw InvalidArgument("pxp_hamiltonian: needs a blockaded ring basis");
    const int n = basis->n_sites();
    Triplets t;
    for (Index i = 0; i < basis->dim(); ++i) {
        const auto bits = basis->state(i);
        for (int s = 0; s < n; ++s) {
            const auto left = basis->site_mask((s + n - 1) % n);
            const auto right = basis->site_mask((s + 1) % n);
            if ((bits & left) || (bits & right)) continue;
            if (auto j = basis->index_of(bits ^ basis->site_mask(s))) t.emplace_back(*j, i, omega);
        }
    }
    return SpinOperator::from_triplets(std::move(basis), t, true);
}

RydbergModel::RydbergModel(BasisPtr basis, const RMat& v) : basis_(std::move(basis)) {
    const int n = basis_->n_sites();
    check_pair_matrix(v, n, "RydbergModel");
    const Index d = basis_->dim();
    Triplets t;
    append_sx_sum(*basis_, 1.0, t);
    SpMat sx(d, d);
    sx.setFromTriplets(t.begin(), t.end());
    sx_sum_ = CMat(sx);
    occupation_ = RMat::Zero(d, n);
    interaction_ = RVec::Zero(d);
    for (Index i = 0; i < d; ++i) {
        for (int a = 0; a < n; ++a) {
            if (!basis_->excited(i, a)) continue;
            occupation_(i, a) = 1.0;
            for (int b = a + 1; b < n; ++b) {
                if (basis_->excited(i, b)) interaction_(i) += v(a, b);
            }
        }
    }
}

CMat RydbergModel::hamiltonian(double omega, const std::vector<double>& detunings) const {
    check_site_vector(detunings, n_sites(), "RydbergModel::hamiltonian");
    const RVec delta = Eigen::Map<const RVec>(detunings.data(), n_sites());
    const RVec diag = interaction_ + occupation_ * delta;
    CMat h = (0.5 * omega) * sx_sum_;
    h.diagonal() += diag.cast<cplx>();
    return h;
}

SpinOperator RydbergModel::hamiltonian_op(double omega, const std::vector<double>& detunings) const {
    return SpinOperator(basis_, hamiltonian(omega, detunings), true);
}

}  // namespace qrc
