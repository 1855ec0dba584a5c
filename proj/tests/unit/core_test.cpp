#include "qrc/core/basis.hpp"
#include "qrc/core/evolution.hpp"
#include "qrc/core/measures.hpp"
#include "qrc/core/spin_operator.hpp"
#include "qrc/core/state.hpp"
#include "qrc/core/superoperator.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

using namespace qrc;
using qrc::testing::kron_chain;
using qrc::testing::pauli2;
using qrc::testing::random_density;
using qrc::testing::random_hermitian;
using qrc::testing::random_state;
using qrc::testing::site_op;

namespace {

std::mt19937_64 rng_for(int k) { return std::mt19937_64(0xC0FFEEULL + static_cast<unsigned>(k)); }

double overlap2(const CVec& a, const CVec& b) { return std::norm(a.dot(b)); }

SpinOperator dense_op(BasisPtr b, const CMat& m, bool herm = true) { return SpinOperator(b, m, herm); }

}  // namespace

// ---------- basis ----------

TEST(HilbertBasis, FullBasisIsLexicographic) {
    auto b = HilbertBasis::full(3);
    ASSERT_EQ(b->dim(), 8);
    for (Index i = 0; i < 8; ++i) EXPECT_EQ(b->state(i), static_cast<HilbertBasis::Bits>(i));
    EXPECT_EQ(b->label(0), "ggg");
    EXPECT_EQ(b->label(4), "rgg");
    EXPECT_EQ(b->label(1), "ggr");
}

TEST(HilbertBasis, BlockadedRingThreeSites) {
    auto b = HilbertBasis::blockaded_ring(3);
    ASSERT_EQ(b->dim(), 4);
    std::vector<std::string> labels;
    for (Index i = 0; i < b->dim(); ++i) labels.push_back(b->label(i));
    EXPECT_EQ(labels, (std::vector<std::string>{"ggg", "ggr", "grg", "rgg"}));
}

TEST(HilbertBasis, BlockadedDimensionsFollowLucasAndFibonacci) {
    // ring: Lucas numbers, chain: Fibonacci numbers F(n+2)
    EXPECT_EQ(HilbertBasis::blockaded_ring(4)->dim(), 7);
    EXPECT_EQ(HilbertBasis::blockaded_ring(6)->dim(), 18);
    EXPECT_EQ(HilbertBasis::blockaded_ring(8)->dim(), 47);
    EXPECT_EQ(HilbertBasis::blockaded_chain(8)->dim(), 55);
    EXPECT_EQ(HilbertBasis::blockaded_chain(10)->dim(), 144);
}

TEST(HilbertBasis, BlockadedStatesHaveNoAdjacentExcitations) {
    for (int n : {5, 6, 7}) {
        auto ring = HilbertBasis::blockaded_ring(n);
        auto full = HilbertBasis::full(n);
        Index count = 0;
        for (Index i = 0; i < full->dim(); ++i) {
            bool ok = true;
            for (int s = 0; s < n; ++s) {
                if (full->excited(i, s) && full->excited(i, (s + 1) % n)) ok = false;
            }
            EXPECT_EQ(ok, ring->index_of(full->state(i)).has_value());
            count += ok ? 1 : 0;
        }
        EXPECT_EQ(count, ring->dim());
    }
}

TEST(HilbertBasis, LabelRoundTrip) {
    auto b = HilbertBasis::blockaded_ring(8);
    for (Index i = 0; i < b->dim(); ++i) EXPECT_EQ(b->index_of_label(b->label(i)), i);
    EXPECT_THROW(b->index_of_label("rrgggggg"), InvalidArgument);
    EXPECT_THROW(b->index_of_label("rgx"), InvalidArgument);
}

// ---------- operators ----------

TEST(BuildPauli, SingleSpinDefinitions) {
    auto b = HilbertBasis::full(1);
    const CMat z = build_pauli(b, 0, Axis::z).dense();
    EXPECT_EQ(z(0, 0), cplx(-1.0));
    EXPECT_EQ(z(1, 1), cplx(1.0));
    EXPECT_EQ(z(0, 1), cplx(0.0));
    const CMat x = build_pauli(b, 0, Axis::x).dense();
    EXPECT_EQ(x(0, 1), cplx(1.0));
    EXPECT_EQ(x(1, 0), cplx(1.0));
    EXPECT_EQ(x(0, 0), cplx(0.0));
}

TEST(BuildPauli, MatchesKroneckerOracle) {
    for (int n : {2, 3, 4}) {
        auto b = HilbertBasis::full(n);
        for (int s = 0; s < n; ++s) {
            for (char a : {'x', 'y', 'z'}) {
                const CMat got = build_pauli(b, s, parse_axis(a)).dense();
                EXPECT_LT(max_abs(got - site_op(n, s, a)), 1e-15) << "n=" << n << " site=" << s << " axis=" << a;
            }
        }
    }
}

TEST(BuildPauli, PauliAlgebra) {
    auto b = HilbertBasis::full(1);
    const CMat x = build_pauli(b, 0, Axis::x).dense();
    const CMat y = build_pauli(b, 0, Axis::y).dense();
    const CMat z = build_pauli(b, 0, Axis::z).dense();
    EXPECT_LT(max_abs(x * y - kI * z), 1e-15);
}

TEST(BuildPauli, BlockadedIsProjectedFullOperator) {
    auto ring = HilbertBasis::blockaded_ring(5);
    auto full = HilbertBasis::full(5);
    for (char a : {'x', 'y', 'z'}) {
        const CMat big = site_op(5, 2, a);
        const CMat got = build_pauli(ring, 2, parse_axis(a)).dense();
        for (Index i = 0; i < ring->dim(); ++i)
            for (Index j = 0; j < ring->dim(); ++j)
                EXPECT_EQ(got(i, j), big(ring->state(i), ring->state(j)));
    }
}

TEST(BuildPauli, SiteOutOfRange) {
    EXPECT_THROW(build_pauli(HilbertBasis::full(2), 2, Axis::x), InvalidArgument);
    EXPECT_THROW(build_pauli(HilbertBasis::full(2), -1, Axis::z), InvalidArgument);
}

TEST(SpinOperator, StorageSwitchesAtDenseLimit) {
    EXPECT_TRUE(build_pauli(HilbertBasis::full(7), 0, Axis::x).is_dense());
    EXPECT_FALSE(build_pauli(HilbertBasis::full(8), 0, Axis::x).is_dense());
    const auto a = build_pauli(HilbertBasis::full(8), 1, Axis::x);
    const auto b = build_pauli(HilbertBasis::full(8), 1, Axis::z);
    EXPECT_LT(max_abs((a * b).dense() - a.dense() * b.dense()), 1e-15);
}

TEST(SpinOperator, HermitianHintIsValidated) {
    auto b = HilbertBasis::full(1);
    CMat m = CMat::Zero(2, 2);
    m(0, 1) = 1.0;
    EXPECT_THROW(SpinOperator(b, m, true), InvalidArgument);
    EXPECT_NO_THROW(SpinOperator(b, m, false));
    EXPECT_THROW(SpinOperator(b, CMat::Zero(3, 3)), DimensionMismatch);
}

// ---------- states ----------

TEST(QuantumState, ValidatesInvariants) {
    auto b = HilbertBasis::full(1);
    CVec v(2);
    v << 1.0, 1.0;
    EXPECT_THROW(QuantumState::pure(b, v), InvalidArgument);
    EXPECT_NO_THROW(QuantumState::pure_normalized(b, v));
    CMat rho = CMat::Zero(2, 2);
    rho(0, 0) = 1.5;
    rho(1, 1) = -0.5;
    EXPECT_THROW(QuantumState::mixed(b, rho), InvalidArgument);
    rho(0, 0) = 0.5;
    rho(1, 1) = 0.5;
    rho(0, 1) = 0.1;
    EXPECT_THROW(QuantumState::mixed(b, rho), InvalidArgument);
}

// ---------- expectation ----------

TEST(Expectation, Examples) {
    auto b = HilbertBasis::full(1);
    EXPECT_DOUBLE_EQ(expectation_real(QuantumState::configuration(b, "r"), build_pauli(b, 0, Axis::z)), 1.0);
    CVec plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(expectation_real(QuantumState::pure(b, plus), build_pauli(b, 0, Axis::x)), 1.0, 1e-15);
}

TEST(Expectation, MatchesDenseTrace) {
    auto rng = rng_for(1);
    auto b = HilbertBasis::full(3);
    for (int k = 0; k < 5; ++k) {
        const CMat a = random_hermitian(8, rng);
        const CMat rho = random_density(8, rng);
        const CVec psi = random_state(8, rng);
        const SpinOperator op(b, a, true);
        EXPECT_NEAR(expectation_real(QuantumState::mixed(b, rho), op), (a * rho).trace().real(), 1e-10);
        EXPECT_NEAR(expectation_real(QuantumState::pure(b, psi), op), (psi.adjoint() * a * psi)(0).real(), 1e-10);
    }
}

// ---------- partial trace and entropy ----------

TEST(PartialTrace, ProductAndBell) {
    auto b = HilbertBasis::full(2);
    const auto gr = QuantumState::configuration(b, "gr");
    const CMat r0 = partial_trace(gr, {0}).density();
    EXPECT_NEAR(std::abs(r0(0, 0) - 1.0), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(r0(1, 1)), 0.0, 1e-15);

    CVec bell = CVec::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const CMat rb = partial_trace(QuantumState::pure(b, bell), {0}).density();
    EXPECT_LT(max_abs(rb - 0.5 * CMat::Identity(2, 2)), 1e-15);
    EXPECT_THROW(partial_trace(gr, {}), InvalidArgument);
    EXPECT_THROW(partial_trace(gr, {2}), InvalidArgument);
}

TEST(PartialTrace, SchmidtSpectraAgree) {
    auto rng = rng_for(2);
    auto b = HilbertBasis::full(3);
    for (int k = 0; k < 5; ++k) {
        const auto s = QuantumState::pure(b, random_state(8, rng));
        const CMat ra = partial_trace(s, {0, 1}).density();
        const CMat rb = partial_trace(s, {2}).density();
        EXPECT_NEAR(ra.trace().real(), 1.0, 1e-10);
        Eigen::SelfAdjointEigenSolver<CMat> ea(ra), eb(rb);
        // the 4x4 reduction has the 2 nonzero eigenvalues of the 2x2 one plus zeros
        EXPECT_NEAR(ea.eigenvalues()(3), eb.eigenvalues()(1), 1e-9);
        EXPECT_NEAR(ea.eigenvalues()(2), eb.eigenvalues()(0), 1e-9);
        EXPECT_NEAR(ea.eigenvalues()(1), 0.0, 1e-9);
        EXPECT_NEAR(ea.eigenvalues()(0), 0.0, 1e-9);
    }
}

TEST(PartialTrace, MatchesKroneckerContraction) {
    auto rng = rng_for(3);
    const CMat rho = random_density(16, rng);
    // oracle: explicit index contraction over sites 1 and 3
    CMat expect = CMat::Zero(4, 4);
    for (int a0 = 0; a0 < 2; ++a0)
        for (int a2 = 0; a2 < 2; ++a2)
            for (int b0 = 0; b0 < 2; ++b0)
                for (int b2 = 0; b2 < 2; ++b2)
                    for (int t1 = 0; t1 < 2; ++t1)
                        for (int t3 = 0; t3 < 2; ++t3) {
                            const int i = a0 * 8 + t1 * 4 + a2 * 2 + t3;
                            const int j = b0 * 8 + t1 * 4 + b2 * 2 + t3;
                            expect(a0 * 2 + a2, b0 * 2 + b2) += rho(i, j);
                        }
    EXPECT_LT(max_abs(partial_trace_matrix(rho, 4, {2, 0}) - expect), 1e-14);
}

TEST(Entropy, ProductBellAndComplementarity) {
    auto b2 = HilbertBasis::full(2);
    EXPECT_NEAR(entanglement_entropy(QuantumState::configuration(b2, "rg"), {0}), 0.0, 1e-9);
    CVec bell = CVec::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(entanglement_entropy(QuantumState::pure(b2, bell), {1}), std::log(2.0), 1e-9);

    auto rng = rng_for(4);
    auto b4 = HilbertBasis::full(4);
    for (int k = 0; k < 10; ++k) {
        const auto s = QuantumState::pure(b4, random_state(16, rng));
        EXPECT_NEAR(entanglement_entropy(s, {0, 1}), entanglement_entropy(s, {2, 3}), 1e-9);
        EXPECT_NEAR(entanglement_entropy(s, {1}), entanglement_entropy(s, {0, 2, 3}), 1e-9);
        EXPECT_NEAR(entanglement_entropy(s, {0, 1}), von_neumann_entropy(partial_trace(s, {0, 1}).density()), 1e-9);
    }
    EXPECT_THROW(entanglement_entropy(QuantumState::mixed(b2, 0.25 * CMat::Identity(4, 4)), {0}), InvalidArgument);
}

TEST(Entropy, BlockadedStatesAreEmbedded) {
    auto ring = HilbertBasis::blockaded_ring(4);
    auto rng = rng_for(5);
    const auto s = QuantumState::pure(ring, random_state(ring->dim(), rng));
    const auto full = s.embedded_in_full();
    EXPECT_NEAR(entanglement_entropy(s, {0}), entanglement_entropy(full, {0}), 1e-12);
}

// ---------- fidelity ----------

TEST(Fidelity, Examples) {
    auto rng = rng_for(6);
    auto b = HilbertBasis::full(2);
    const auto rho = QuantumState::mixed(b, random_density(4, rng));
    EXPECT_NEAR(state_fidelity(rho, rho), 1.0, 1e-9);
    EXPECT_NEAR(state_fidelity(QuantumState::configuration(b, "gg"), QuantumState::configuration(b, "rg")), 0.0, 1e-9);
    const CVec psi = random_state(4, rng);
    const auto p = QuantumState::pure(b, psi);
    EXPECT_NEAR(state_fidelity(p, rho), (psi.adjoint() * rho.density() * psi)(0).real(), 1e-9);
}

TEST(Fidelity, SymmetricAndDiscriminating) {
    auto rng = rng_for(7);
    auto b = HilbertBasis::full(2);
    for (int k = 0; k < 10; ++k) {
        const auto a = QuantumState::mixed(b, random_density(4, rng, 2));
        const auto c = QuantumState::mixed(b, random_density(4, rng));
        EXPECT_NEAR(state_fidelity(a, c), state_fidelity(c, a), 1e-9);
        EXPECT_LT(state_fidelity(a, c), 1.0 - 1e-6);
    }
}

// ---------- unitary evolution ----------

TEST(EvolveUnitary, RabiCycles) {
    auto b = HilbertBasis::full(1);
    const double omega = 2.0;
    const auto h = OperatorSchedule::constant(build_pauli(b, 0, Axis::x) * (omega / 2.0));
    const auto g = QuantumState::configuration(b, "g");
    for (bool exact : {true, false}) {
        EvolutionOptions opt;
        opt.allow_exact = exact;
        const auto full = evolve_unitary(g, h, kTwoPi / omega, 1e-3, nullptr, opt);
        EXPECT_GE(overlap2(full.amplitudes(), g.amplitudes()), 1.0 - 1e-8);
        const auto half = evolve_unitary(g, h, kPi / omega, 1e-3, nullptr, opt);
        EXPECT_GE(std::norm(half.amplitudes()(1)), 1.0 - 1e-8);
    }
}

TEST(EvolveUnitary, XorConfigurationMatchesEigenOracle) {
    // H = J s1z s3z + J s2z s3z + (Omega/2) sum sx, J/Omega = 10
    const double omega = 1.0, j = 10.0;
    CMat hm = j * (site_op(3, 0, 'z') * site_op(3, 2, 'z') + site_op(3, 1, 'z') * site_op(3, 2, 'z')) +
              0.5 * omega * (site_op(3, 0, 'x') + site_op(3, 1, 'x') + site_op(3, 2, 'x'));
    Eigen::SelfAdjointEigenSolver<CMat> es(hm);
    auto b = HilbertBasis::full(3);
    const auto h = OperatorSchedule::constant(SpinOperator(b, hm, true));
    const double t = kPi / omega;
    for (const char* in : {"rgg", "rrg"}) {
        const auto s0 = QuantumState::configuration(b, in);
        const CVec phases = (-kI * t * es.eigenvalues().cast<cplx>()).array().exp().matrix();
        const CVec oracle = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint() * s0.amplitudes();
        double p_oracle = 0.0;
        for (Index i = 0; i < 8; ++i)
            if (i & 1) p_oracle += std::norm(oracle(i));
        EvolutionOptions opt;
        opt.allow_exact = false;
        EvolutionDiagnostics diag;
        const auto rk = evolve_unitary(s0, h, t, 2e-4, &diag, opt);
        double p_rk = 0.0;
        for (Index i = 0; i < 8; ++i)
            if (i & 1) p_rk += std::norm(rk.amplitudes()(i));
        EXPECT_NEAR(p_rk, p_oracle, 1e-8) << in;
        EXPECT_LT(diag.max_norm_defect, 1e-8);
    }
}

TEST(EvolveUnitary, PiecewiseScheduleAndEnergyConservation) {
    auto rng = rng_for(8);
    auto b = HilbertBasis::full(3);
    const CMat h1 = random_hermitian(8, rng), h2 = random_hermitian(8, rng);
    const auto sched = OperatorSchedule::piecewise({0.0, 0.3}, {dense_op(b, h1), dense_op(b, h2)});
    const auto s0 = QuantumState::pure(b, random_state(8, rng));
    const auto exact = evolve_unitary(s0, sched, 0.7, 1e-3);
    EvolutionOptions opt;
    opt.allow_exact = false;
    const auto rk = evolve_unitary(s0, sched, 0.7, 1e-4, nullptr, opt);
    EXPECT_GE(overlap2(exact.amplitudes(), rk.amplitudes()), 1.0 - 1e-10);

    const auto cst = OperatorSchedule::constant(dense_op(b, h1));
    const double e0 = expectation_real(s0, cst.op(0));
    const auto later = evolve_unitary(s0, cst, 2.0, 1e-3, nullptr, opt);
    EXPECT_LT(std::abs(expectation_real(later, cst.op(0)) - e0), 1e-7);
}

TEST(EvolveUnitary, TimeDependentProviderConverges) {
    auto b = HilbertBasis::full(1);
    const auto x = build_pauli(b, 0, Axis::x);
    // H(t) = (t/2) sx: rotation angle int_0^T t dt = T^2/2
    const auto sched = OperatorSchedule::function(b, [&](double t) { return x * (0.5 * t); });
    const double big_t = std::sqrt(2.0 * kPi);
    EvolutionOptions opt;
    opt.convergence_check = true;
    EvolutionDiagnostics diag;
    const auto out = evolve_unitary(QuantumState::configuration(b, "g"), sched, big_t, 1e-3, &diag, opt);
    EXPECT_GE(std::norm(out.amplitudes()(1)), 1.0 - 1e-9);
    EXPECT_LT(diag.convergence_delta, 1e-10);
}

TEST(EvolveUnitary, Errors) {
    auto b = HilbertBasis::full(1);
    CMat m = CMat::Zero(2, 2);
    m(0, 1) = 1.0;
    const auto nonherm = OperatorSchedule::constant(SpinOperator(b, m, false));
    const auto g = QuantumState::configuration(b, "g");
    EXPECT_THROW(evolve_unitary(g, nonherm, 1.0, 1e-3), InvalidArgument);
    const auto h = OperatorSchedule::constant(build_pauli(b, 0, Axis::x));
    EXPECT_THROW(evolve_unitary(g, h, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(evolve_unitary(g, h, 1.0, 0.0), InvalidArgument);
    EXPECT_GE(overlap2(evolve_unitary(g, h, 0.0, 1e-3).amplitudes(), g.amplitudes()), 1.0);
}

// ---------- Lindblad evolution ----------

TEST(EvolveLindblad, SpontaneousDecay) {
    auto b = HilbertBasis::full(1);
    const double gamma = 0.7;
    std::vector<JumpOperator> jumps{JumpOperator(lowering_operator(b, 0) * std::sqrt(gamma))};
    const auto h = OperatorSchedule::constant(SpinOperator::zero(b));
    for (double t : {0.5, 2.0, 5.0}) {
        EvolutionDiagnostics diag;
        const auto out = evolve_lindblad(QuantumState::configuration(b, "r"), h, jumps, t, 1e-3, &diag);
        EXPECT_NEAR(out.density()(1, 1).real(), std::exp(-gamma * t), 1e-6);
        EXPECT_LT(diag.trace_drift, 1e-7);
    }
}

TEST(EvolveLindblad, ClosedLimitMatchesUnitary) {
    auto b = HilbertBasis::full(3);
    for (int k = 0; k < 10; ++k) {
        auto rng = rng_for(100 + k);
        const SpinOperator h(b, random_hermitian(8, rng), true);
        const auto s0 = QuantumState::pure(b, random_state(8, rng));
        const auto sched = OperatorSchedule::constant(h);
        const auto u = evolve_unitary(s0, sched, 1.0, 1e-3);
        const auto l = evolve_lindblad(s0, sched, {}, 1.0, 1e-3);
        EXPECT_LT(max_abs(l.density() - u.density()), 1e-7) << k;
    }
}

TEST(EvolveLindblad, TraceHermiticityPositivity) {
    auto rng = rng_for(9);
    auto b = HilbertBasis::full(3);
    const SpinOperator h(b, 3.0 * random_hermitian(8, rng), true);
    std::vector<JumpOperator> jumps;
    for (int s = 0; s < 3; ++s) jumps.emplace_back(lowering_operator(b, s) * 0.5);
    EvolutionDiagnostics diag;
    const auto out =
        evolve_lindblad(QuantumState::configuration(b, "rrr"), OperatorSchedule::constant(h), jumps, 3.0, 1e-3, &diag);
    EXPECT_LT(diag.trace_drift, 1e-7);
    EXPECT_GE(diag.min_eigenvalue, -1e-6);
    EXPECT_LT(max_abs(out.density() - out.density().adjoint()), 1e-12);
}

TEST(EvolveLindblad, LargeStepAborts) {
    auto b = HilbertBasis::full(1);
    const SpinOperator h = build_pauli(b, 0, Axis::x) * 200.0;
    std::vector<JumpOperator> jumps{JumpOperator(lowering_operator(b, 0) * 3.0)};
    EXPECT_THROW(evolve_lindblad(QuantumState::configuration(b, "r"), OperatorSchedule::constant(h), jumps, 1.0, 0.05),
                 NumericalError);
}

TEST(EvolveLindblad, JumpBasisMismatch) {
    auto b1 = HilbertBasis::full(1);
    auto b2 = HilbertBasis::full(2);
    std::vector<JumpOperator> jumps{JumpOperator(lowering_operator(b2, 0))};
    EXPECT_THROW(evolve_lindblad(QuantumState::configuration(b1, "r"),
                                 OperatorSchedule::constant(SpinOperator::zero(b1)), jumps, 1.0, 1e-2),
                 DimensionMismatch);
}

// ---------- split-step propagator ----------

TEST(LindbladPropagator, MatchesFineRk4) {
    auto rng = rng_for(10);
    auto b = HilbertBasis::full(3);
    const SpinOperator h(b, 10.0 * random_hermitian(8, rng), true);
    std::vector<JumpOperator> jumps;
    for (int s = 0; s < 3; ++s) {
        jumps.emplace_back(lowering_operator(b, s) * 0.2);
        jumps.emplace_back(ground_projector(b, s) * 0.3);
    }
    const auto s0 = QuantumState::pure(b, random_state(8, rng));
    const auto ref = evolve_lindblad(s0, OperatorSchedule::constant(h), jumps, 1.0, 2e-4);
    const double coarse = max_abs(LindbladPropagator(h, jumps, 0.005).evolve(s0.density(), 1.0) - ref.density());
    const double fine = max_abs(LindbladPropagator(h, jumps, 0.0025).evolve(s0.density(), 1.0) - ref.density());
    EXPECT_LT(coarse, 5e-6);
    // second-order splitting
    EXPECT_GT(coarse / fine, 3.5);
    EXPECT_LT(coarse / fine, 4.5);
}

TEST(LindbladPropagator, HeisenbergDuality) {
    auto rng = rng_for(11);
    auto b = HilbertBasis::full(3);
    const SpinOperator h(b, random_hermitian(8, rng), true);
    std::vector<JumpOperator> jumps{JumpOperator(lowering_operator(b, 1) * 0.5)};
    const LindbladPropagator prop(h, jumps, 0.01);
    const CMat rho = random_density(8, rng);
    const CMat obs = random_hermitian(8, rng);
    const double t = 0.733;
    const cplx lhs = (obs * prop.evolve(rho, t)).trace();
    const cplx rhs = (prop.evolve_observable(obs, t) * rho).trace();
    EXPECT_LT(std::abs(lhs - rhs), 1e-12);
}

TEST(LindbladPropagator, UnitaryLimitIsExact) {
    auto rng = rng_for(12);
    auto b = HilbertBasis::full(2);
    const SpinOperator h(b, random_hermitian(4, rng), true);
    const LindbladPropagator prop(h, {}, 0.01);
    const CVec psi = random_state(4, rng);
    const CVec out = prop.evolve_pure(psi, 1.3);
    const auto ref = evolve_unitary(QuantumState::pure(b, psi), OperatorSchedule::constant(h), 1.3, 1e-3);
    EXPECT_LT((out - ref.amplitudes()).cwiseAbs().maxCoeff(), 1e-12);
}

// ---------- superoperators ----------

TEST(SuperOperator, ZeroGenerator) {
    const auto s = SuperOperator::zero(HilbertBasis::full(2));
    const auto eig = superop_eigendecomposition(s);
    ASSERT_EQ(eig.size(), 16u);
    for (const auto& e : eig) EXPECT_EQ(std::abs(e.value), 0.0);
}

TEST(SuperOperator, CommutatorSpectrum) {
    auto rng = rng_for(13);
    auto b = HilbertBasis::full(2);
    const CMat hm = random_hermitian(4, rng);
    const auto eig = superop_eigendecomposition(SuperOperator::commutator(SpinOperator(b, hm, true)));
    Eigen::SelfAdjointEigenSolver<CMat> es(hm);
    std::vector<double> expect, got;
    for (Index j = 0; j < 4; ++j)
        for (Index k = 0; k < 4; ++k) expect.push_back(-(es.eigenvalues()(j) - es.eigenvalues()(k)));
    for (const auto& e : eig) {
        EXPECT_NEAR(e.value.real(), 0.0, 1e-8);
        got.push_back(e.value.imag());
    }
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_NEAR(got[i], expect[i], 1e-8);
}

TEST(SuperOperator, ActionOnMatrixUnitsMatchesGenerator) {
    auto rng = rng_for(14);
    auto b = HilbertBasis::full(2);
    const SpinOperator h(b, random_hermitian(4, rng), true);
    std::vector<JumpOperator> jumps{JumpOperator(lowering_operator(b, 0) * 0.7),
                                    JumpOperator(ground_projector(b, 1) * 0.4)};
    const auto s = SuperOperator::lindbladian(h, jumps);
    const Dissipator dis(4, jumps);
    for (Index i = 0; i < 4; ++i) {
        for (Index j = 0; j < 4; ++j) {
            CMat e = CMat::Zero(4, 4);
            e(i, j) = 1.0;
            const CMat direct = -kI * (h.dense() * e - e * h.dense()) + dis.apply(e);
            EXPECT_LT(max_abs(s.apply(e) - direct), 1e-10);
        }
    }
    EXPECT_LT(s.trace_defect(), 1e-8);
}

TEST(SuperOperator, EigenvectorsSatisfyEigenEquation) {
    auto rng = rng_for(15);
    auto b = HilbertBasis::full(2);
    const SpinOperator h(b, random_hermitian(4, rng), true);
    std::vector<JumpOperator> jumps{JumpOperator(lowering_operator(b, 0) * 0.7)};
    const auto s = SuperOperator::lindbladian(h, jumps);
    const auto eig = superop_eigendecomposition(s);
    for (std::size_t k = 0; k + 1 < eig.size(); ++k) EXPECT_GE(eig[k].value.real(), eig[k + 1].value.real());
    for (const auto& e : eig) EXPECT_LT(max_abs(s.apply(e.vector) - e.value * e.vector), 1e-9);
}
