#include "qrc/core/evolution.hpp"
#include "qrc/core/measures.hpp"
#include "qrc/core/superoperator.hpp"
#include "qrc/rydberg/geometry.hpp"
#include "qrc/rydberg/hamiltonian.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>

using namespace qrc;
using qrc::testing::kron_chain;
using qrc::testing::pauli2;
using qrc::testing::site_op;

namespace {

RVec sorted_eigenvalues(const CMat& h) {
    Eigen::SelfAdjointEigenSolver<CMat> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

}  // namespace

TEST(Interaction, BlockadeSpacingGivesQuotedStrength) {
    const double v = kTwoPi * 10.0;
    const double a0 = blockade_spacing(v);
    EXPECT_NEAR(a0, std::pow(86290.0, 1.0 / 6.0), 1e-12);
    const RMat j = interaction_matrix(RydbergGeometry::chain(2, a0));
    EXPECT_NEAR(j(0, 1), v, 1e-9 * v);
}

TEST(Interaction, CrossSpeciesIsAttractiveWithTabulatedRatio) {
    const auto same = interaction_matrix(RydbergGeometry::chain(2, 7.0));
    const auto cross = interaction_matrix(RydbergGeometry::chain(2, 7.0, {Species::r70, Species::r73}));
    EXPECT_LT(cross(0, 1), 0.0);
    EXPECT_NEAR(std::abs(cross(0, 1)) / same(0, 1), 836.6 / 862.9, 1e-12);
    InteractionTable{}.validate();
    EXPECT_THROW((InteractionTable{1.0, -0.5}.validate()), InvalidArgument);
}

TEST(Interaction, InverseSixthPowerScaling) {
    const auto g1 = RydbergGeometry::lattice(2, 3, 5.0, {Species::r70, Species::r73, Species::r70, Species::r70,
                                                        Species::r73, Species::r70});
    const auto g2 = RydbergGeometry::lattice(2, 3, 10.0, g1.species());
    const RMat j1 = interaction_matrix(g1), j2 = interaction_matrix(g2);
    EXPECT_LT((j1 / 64.0 - j2).cwiseAbs().maxCoeff(), 1e-12 * j1.cwiseAbs().maxCoeff());
}

TEST(Interaction, SymmetricZeroDiagonalSignBySpecies) {
    std::vector<Species> sp{Species::r70, Species::r73, Species::r70, Species::r73, Species::r70};
    const auto g = RydbergGeometry::chain(5, 6.0, sp).jittered(0.05, 17);
    const RMat j = interaction_matrix(g);
    for (int a = 0; a < 5; ++a) {
        EXPECT_EQ(j(a, a), 0.0);
        for (int b = 0; b < 5; ++b) {
            EXPECT_EQ(j(a, b), j(b, a));
            if (a != b) EXPECT_EQ(j(a, b) > 0.0, sp[a] == sp[b]);
        }
    }
}

TEST(Geometry, JitterIsSeededAndRecorded) {
    const auto base = RydbergGeometry::chain(4, 6.0);
    const auto a = base.jittered(0.05, 3), b = base.jittered(0.05, 3), c = base.jittered(0.05, 4);
    EXPECT_EQ(a.seed(), 3u);
    EXPECT_DOUBLE_EQ(a.jitter_sigma(), 0.05);
    for (int i = 0; i < 4; ++i) EXPECT_EQ(a.positions()[i], b.positions()[i]);
    EXPECT_NE(a.positions()[0], c.positions()[0]);
    EXPECT_LT((a.positions()[2] - base.positions()[2]).norm(), 0.5);
}

TEST(Geometry, RejectsCoincidentAtoms) {
    using P = RydbergGeometry::Point;
    EXPECT_THROW(RydbergGeometry({P(0, 0), P(0, 0)}, {}), InvalidArgument);
    EXPECT_THROW(RydbergGeometry({P(0, 0), P(1, 0)}, {Species::r70}), DimensionMismatch);
}

TEST(QrnnHamiltonian, FreeDriveSpectrum) {
    const int n = 3;
    const double omega = 2.0;
    auto b = HilbertBasis::full(n);
    const RVec ev = sorted_eigenvalues(qrnn_hamiltonian(RMat::Zero(n, n), omega, {0, 0, 0}, b).dense());
    // eigenvalues (omega/2) * (n - 2k) with binomial multiplicities
    const std::vector<double> expect{-3, -1, -1, -1, 1, 1, 1, 3};
    for (int i = 0; i < 8; ++i) EXPECT_NEAR(ev(i), expect[i] * omega / 2.0, 1e-12);
}

TEST(QrnnHamiltonian, SingleSpinDetuning) {
    auto b = HilbertBasis::full(1);
    const CMat h = qrnn_hamiltonian(RMat::Zero(1, 1), 0.0, {0.7}, b).dense();
    EXPECT_NEAR(h(0, 0).real(), 0.7, 1e-15);   // g: -D * (-1)
    EXPECT_NEAR(h(1, 1).real(), -0.7, 1e-15);  // r: -D * (+1)
}

TEST(QrnnHamiltonian, XorSetupMatchesKroneckerOracle) {
    const double omega = 1.3, jv = 13.0;
    RMat j = RMat::Zero(3, 3);
    j(0, 2) = j(2, 0) = jv;
    j(1, 2) = j(2, 1) = jv;
    auto b = HilbertBasis::full(3);
    const CMat h = qrnn_hamiltonian(j, omega, {0, 0, 0}, b).dense();
    CMat oracle = jv * (site_op(3, 0, 'z') * site_op(3, 2, 'z') + site_op(3, 1, 'z') * site_op(3, 2, 'z'));
    for (int s = 0; s < 3; ++s) oracle += 0.5 * omega * site_op(3, s, 'x');
    EXPECT_LT(max_abs(h - oracle), 1e-12);
}

TEST(QrnnHamiltonian, ScheduleFollowsDriveSegments) {
    auto b = HilbertBasis::full(2);
    RMat j = RMat::Zero(2, 2);
    j(0, 1) = j(1, 0) = 0.4;
    DriveProfile drive;
    drive.then(0.5, 1.0, {0.1, 0.2}).then(1.0, 2.0, {0.0, -0.3});
    const auto sched = build_qrnn_hamiltonian(j, drive, b);
    EXPECT_LT(max_abs(sched.at(0.2).dense() - qrnn_hamiltonian(j, 1.0, {0.1, 0.2}, b).dense()), 1e-15);
    EXPECT_LT(max_abs(sched.at(1.2).dense() - qrnn_hamiltonian(j, 2.0, {0.0, -0.3}, b).dense()), 1e-15);
    EXPECT_DOUBLE_EQ(drive.duration(), 1.5);
    for (double t : {0.0, 0.7, 1.49}) EXPECT_LT(sched.at(t).hermiticity_defect(), 1e-12);
}

TEST(DriveProfile, Validation) {
    DriveProfile gap({DriveSegment{0.0, 1.0, 1.0, {0.0}}, DriveSegment{1.5, 2.0, 1.0, {0.0}}});
    EXPECT_THROW(gap.validate(1), InvalidArgument);
    DriveProfile late({DriveSegment{0.2, 1.0, 1.0, {0.0}}});
    EXPECT_THROW(late.validate(1), InvalidArgument);
    EXPECT_THROW(DriveProfile::constant(1.0, 1.0, {0.0, 0.0}).validate(1), DimensionMismatch);
    EXPECT_THROW(DriveProfile().then(0.0, 1.0, {0.0}), InvalidArgument);
}

TEST(RydbergHamiltonian, EqualsQrnnFormUpToIdentityShift) {
    // n = (sz + 1)/2 turns D n + V n n into the sz form with J = V/4 and
    // detuning -(D_n/2 + sum_m V_nm / 4), plus a constant.
    const int n = 4;
    std::vector<Species> sp{Species::r70, Species::r73, Species::r70, Species::r70};
    const auto g = RydbergGeometry::chain(n, 6.5, sp).jittered(0.05, 5);
    const RMat v = interaction_matrix(g);
    const std::vector<double> delta{0.3, -1.1, 2.0, 0.0};
    const double omega = kTwoPi * 4.2;
    auto b = HilbertBasis::full(n);
    const auto hr = build_rydberg_hamiltonian(g, InteractionTable{}, DriveProfile::constant(1.0, omega, delta), b);
    std::vector<double> dq(n);
    for (int a = 0; a < n; ++a) {
        double s = 0.0;
        for (int m = 0; m < n; ++m) s += v(a, m);
        dq[a] = -(delta[a] / 2.0 + s / 4.0);
    }
    const CMat diff = hr.at(0.0).dense() - qrnn_hamiltonian(v / 4.0, omega, dq, b).dense();
    const cplx shift = diff(0, 0);
    EXPECT_LT(max_abs(diff - shift * CMat::Identity(16, 16)), 1e-10 * v.cwiseAbs().maxCoeff());
}

TEST(RydbergHamiltonian, DoublyExcitedPairEnergy) {
    const auto g = RydbergGeometry::chain(2, 8.0);
    auto b = HilbertBasis::full(2);
    const auto h = build_rydberg_hamiltonian(g, InteractionTable{}, DriveProfile::constant(1.0, 0.0, {0, 0}), b);
    const auto rr = QuantumState::configuration(b, "rr");
    EXPECT_NEAR(expectation_real(rr, h.at(0.0)), InteractionTable{}.c6_same / std::pow(8.0, 6), 1e-9);
}

TEST(RydbergHamiltonian, BlockadeSuppressesDoubleExcitation) {
    const double omega = 1.0;
    const double a0 = blockade_spacing(50.0 * omega);
    auto b = HilbertBasis::full(2);
    const auto h = build_rydberg_hamiltonian(RydbergGeometry::chain(2, a0), InteractionTable{},
                                             DriveProfile::constant(1.0, omega, {0, 0}), b)
                       .at(0.0);
    Eigen::SelfAdjointEigenSolver<CMat> es(h.dense());
    const CMat nn = (number_operator(b, 0) * number_operator(b, 1)).dense();
    // the three states below the doubly excited level
    for (int k = 0; k < 3; ++k) {
        const CVec v = es.eigenvectors().col(k);
        EXPECT_LT(std::abs(v.dot(nn * v)), 0.02);
    }
}

TEST(RydbergModel, MatchesOperatorBuilderOnBlockadedBasis) {
    const int n = 6;
    const auto g = RydbergGeometry::chain(n, 6.0);
    const RMat v = interaction_matrix(g);
    auto b = HilbertBasis::blockaded_chain(n);
    const RydbergModel model(b, v);
    const std::vector<double> delta{1.0, 2.0, 0.0, 0.0, -0.5, 0.25};
    const CMat h = model.hamiltonian(3.0, delta);
    CMat oracle = CMat::Zero(b->dim(), b->dim());
    for (int s = 0; s < n; ++s) {
        oracle += 1.5 * build_pauli(b, s, Axis::x).dense() + delta[s] * number_operator(b, s).dense();
        for (int m = s + 1; m < n; ++m) oracle += v(s, m) * (number_operator(b, s) * number_operator(b, m)).dense();
    }
    EXPECT_LT(max_abs(h - oracle), 1e-9 * v.maxCoeff());
}

TEST(RydbergModel, EnergyConservedUnderStaticDrive) {
    const int n = 4;
    auto b = HilbertBasis::full(n);
    const RydbergModel model(b, interaction_matrix(RydbergGeometry::chain(n, blockade_spacing(kTwoPi * 10.0))));
    const SpinOperator h = model.hamiltonian_op(kTwoPi * 4.2, {kTwoPi, 0.0, 0.0, 0.0});
    const auto psi0 = QuantumState::configuration(b, "rggr");
    const double e0 = expectation_real(psi0, h);
    for (bool exact : {true, false}) {
        EvolutionOptions opt;
        opt.allow_exact = exact;
        const auto psi = evolve_unitary(psi0, OperatorSchedule::constant(h), 0.5, 1e-4, nullptr, opt);
        EXPECT_LT(std::abs(expectation_real(psi, h) - e0), 1e-7) << "exact=" << exact;
    }
}

TEST(EffectiveJumps, SpontaneousEmissionLimit) {
    auto b = HilbertBasis::full(2);
    const double gamma = 0.8;
    for (JumpMode mode : {JumpMode::incoherent, JumpMode::coherent}) {
        const auto jumps = effective_jumps(b, DissipationSpec{gamma, 1.0, 0.0}, mode);
        ASSERT_EQ(jumps.size(), 2u);
        for (int s = 0; s < 2; ++s) {
            const CMat expect = std::sqrt(gamma) * site_op(2, s, 'x') * site_op(2, s, 'n');
            EXPECT_LT(max_abs(jumps[s].op().dense() - expect), 1e-15);
        }
    }
}

TEST(EffectiveJumps, CoherentAndIncoherentForms) {
    auto b = HilbertBasis::full(1);
    const DissipationSpec d{};
    const double r = std::sqrt(d.gamma);
    const auto coh = effective_jumps(b, d, JumpMode::coherent);
    ASSERT_EQ(coh.size(), 1u);
    CMat expect(2, 2);
    expect << r * d.beta, r * d.alpha, 0.0, 0.0;  // |g>(a<r| + b<g|)
    EXPECT_LT(max_abs(coh[0].op().dense() - expect), 1e-15);
    const auto inc = effective_jumps(b, d, JumpMode::incoherent);
    ASSERT_EQ(inc.size(), 2u);
    EXPECT_LT(max_abs(inc[0].op().dense() + inc[1].op().dense() - expect), 1e-15);
    EXPECT_TRUE(effective_jumps(b, DissipationSpec{0.0, 0.05, 0.16}).empty());
    EXPECT_THROW(effective_jumps(b, DissipationSpec{1.0, 1.5, 0.0}), InvalidArgument);
}

TEST(EffectiveJumps, BetaTermCommutesWithSigmaZ) {
    auto b = HilbertBasis::full(3);
    const auto jumps = effective_jumps(b, DissipationSpec{1.0, 0.0, 0.16});
    for (const auto& l : jumps) {
        const CMat m = l.op().dense();
        EXPECT_LT(max_abs(m - CMat(m.diagonal().asDiagonal())), 1e-15);
        for (int s = 0; s < 3; ++s) {
            const CMat z = build_pauli(b, s, Axis::z).dense();
            EXPECT_LT(max_abs(m * z - z * m), 1e-15);
        }
    }
}

TEST(EffectiveJumps, SingleSpinSteadyStateIsGround) {
    auto b = HilbertBasis::full(1);
    for (auto [a, be] : {std::pair{0.05, 0.16}, std::pair{0.5, 0.5}, std::pair{1.0, 0.3}}) {
        const auto jumps = effective_jumps(b, DissipationSpec{1.0, a, be});
        const auto l = SuperOperator::lindbladian(SpinOperator::zero(b), jumps);
        int zeros = 0;
        for (const auto& p : superop_eigendecomposition(l)) {
            if (std::abs(p.value) > 1e-10) continue;
            ++zeros;
            const CMat rho = p.vector / p.vector.trace();
            EXPECT_NEAR(rho(0, 0).real(), 1.0, 1e-10);
            EXPECT_LT(std::abs(rho(1, 1)), 1e-10);
        }
        EXPECT_EQ(zeros, 1);
    }
}

TEST(EffectiveJumps, CoherentSumHasDrivenSteadyState) {
    // The single-channel form leaves |g><g| non-stationary: -gamma a b / 2
    // feeds the g-r coherence.
    auto b = HilbertBasis::full(1);
    const auto jumps = effective_jumps(b, DissipationSpec{1.0, 0.5, 0.5}, JumpMode::coherent);
    const CMat g = QuantumState::configuration(b, "g").density();
    const CMat out = SuperOperator::lindbladian(SpinOperator::zero(b), jumps).apply(g);
    EXPECT_NEAR(out(0, 1).real(), -0.125, 1e-14);
}

TEST(EffectiveJumps, CompositeDecayRate) {
    // r population under both channels decays as exp(-gamma alpha^2 t)
    auto b = HilbertBasis::full(1);
    const DissipationSpec d{};
    const auto jumps = effective_jumps(b, d);
    const auto h = OperatorSchedule::constant(SpinOperator::zero(b));
    const auto r = QuantumState::configuration(b, "r").to_mixed();
    for (double t : {1.0, 10.0, 20.0}) {
        const auto out = evolve_lindblad(r, h, jumps, t, 1e-2);
        EXPECT_NEAR(out.density()(1, 1).real(), std::exp(-d.gamma * d.alpha * d.alpha * t), 1e-6);
    }
}

TEST(Pxp, ThreeSiteRing) {
    auto b = HilbertBasis::blockaded_ring(3);
    const SpinOperator h = pxp_hamiltonian(b, 1.7);
    ASSERT_EQ(h.dim(), 4);
    EXPECT_NEAR(h.coeff(b->index_of_label("rgg"), b->index_of_label("ggg")).real(), 1.7, 1e-15);
    EXPECT_EQ(h.coeff(b->index_of_label("rgg"), b->index_of_label("grg")), cplx(0.0));
    EXPECT_THROW(pxp_hamiltonian(HilbertBasis::full(3), 1.0), InvalidArgument);
    EXPECT_THROW(pxp_hamiltonian(HilbertBasis::blockaded_chain(3), 1.0), InvalidArgument);
}

TEST(Pxp, RealSymmetricWithSymmetricSpectrum) {
    for (int n = 3; n <= 8; ++n) {
        auto b = HilbertBasis::blockaded_ring(n);
        const CMat h = pxp_hamiltonian(b, 1.0).dense();
        EXPECT_LT(h.imag().cwiseAbs().maxCoeff(), 1e-15);
        EXPECT_LT(max_abs(h - h.transpose()), 1e-15);
        const RVec ev = sorted_eigenvalues(h);
        for (Index k = 0; k < ev.size(); ++k) EXPECT_NEAR(ev(k), -ev(ev.size() - 1 - k), 1e-10) << "n=" << n;
    }
}

TEST(Pxp, NeelExpectationVanishes) {
    auto b = HilbertBasis::blockaded_ring(8);
    const auto af = QuantumState::configuration(b, "grgrgrgr");
    EXPECT_NEAR(expectation_real(af, pxp_hamiltonian(b, 1.0)), 0.0, 1e-15);
}

TEST(Pxp, MatrixElementAudit) {
    auto b = HilbertBasis::blockaded_ring(8);
    const CMat h = pxp_hamiltonian(b, 1.0).dense();
    auto full = HilbertBasis::full(8);
    for (Index i = 0; i < b->dim(); ++i) {
        for (Index j = 0; j < b->dim(); ++j) {
            if (h(i, j) == cplx(0.0)) continue;
            EXPECT_EQ(std::popcount(b->state(i) ^ b->state(j)), 1);
            EXPECT_TRUE(b->admissible(b->state(i)));
        }
    }
    // embedded in the full basis, no element reaches an inadmissible state
    for (Index i = 0; i < full->dim(); ++i) EXPECT_EQ(b->index_of(full->state(i)).has_value(), b->admissible(i));
}
