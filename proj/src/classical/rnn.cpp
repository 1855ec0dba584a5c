#include "qrc/classical/rnn.hpp"

#include <Eigen/LU>

#include <cmath>

namespace qrc {

namespace {

int sign_of(double x) { return x >= 0.0 ? 1 : -1; }

std::size_t bias_index(double t, double tau) {
    return static_cast<std::size_t>(std::max(0.0, std::floor(t / tau + 1e-12)));
}

RVec draw_noise(int n, double sigma, Rng& rng) {
    RVec xi = RVec::Zero(n);
    if (sigma > 0.0) {
        std::normal_distribution<double> g(0.0, sigma);
        for (int i = 0; i < n; ++i) xi(i) = g(rng);
    }
    return xi;
}

void check_size(const RnnParams& p, Index n, const char* where) {
    if (p.size() != n) throw DimensionMismatch(std::string(where) + ": size does not match couplings");
}

}  // namespace

BinaryConfig::BinaryConfig(std::vector<int> bits) : bits_(std::move(bits)) {
    for (int b : bits_) {
        if (b != 1 && b != -1) throw InvalidArgument("BinaryConfig: entries must be +1 or -1");
    }
}

BinaryConfig BinaryConfig::from_index(int n, Index index) {
    if (n < 1 || n > 30 || index < 0 || index >= (Index{1} << n)) {
        throw InvalidArgument("BinaryConfig::from_index: out of range");
    }
    std::vector<int> bits(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) bits[static_cast<std::size_t>(i)] = ((index >> (n - 1 - i)) & 1) ? 1 : -1;
    return BinaryConfig(std::move(bits));
}

Index BinaryConfig::index() const {
    Index out = 0;
    for (int b : bits_) out = (out << 1) | (b > 0 ? 1 : 0);
    return out;
}

RVec BinaryConfig::as_vector() const {
    RVec v(size());
    for (int i = 0; i < size(); ++i) v(i) = bits_[static_cast<std::size_t>(i)];
    return v;
}

const RVec& RnnParams::bias(std::size_t step) const {
    if (biases.empty()) throw InvalidArgument("RnnParams: no biases");
    return biases[std::min(step, biases.size() - 1)];
}

void RnnParams::validate() const {
    if (j.rows() != j.cols() || j.rows() < 1) throw DimensionMismatch("RnnParams: J must be square");
    if ((j - j.transpose()).cwiseAbs().maxCoeff() > 1e-12) throw InvalidArgument("RnnParams: J must be symmetric");
    for (Index i = 0; i < j.rows(); ++i) {
        if (j(i, i) != 0.0) throw InvalidArgument("RnnParams: J diagonal must be zero");
    }
    if (biases.empty()) throw InvalidArgument("RnnParams: no biases");
    for (const auto& u : biases) {
        if (u.size() != j.rows()) throw DimensionMismatch("RnnParams: bias length");
    }
    if (sigma_in < 0.0) throw InvalidArgument("RnnParams: sigma_in must be >= 0");
    if (!(tau > 0.0)) throw InvalidArgument("RnnParams: tau must be positive");
}

StochasticMatrix::StochasticMatrix(RMat entries, double column_tol) : m_(std::move(entries)) {
    if (m_.rows() != m_.cols() || m_.rows() < 1) throw DimensionMismatch("StochasticMatrix: not square");
    if (m_.minCoeff() < 0.0) throw InvalidArgument("StochasticMatrix: negative entry");
    const RVec sums = m_.colwise().sum().transpose();
    if ((sums.array() - 1.0).abs().maxCoeff() > column_tol) {
        throw InvalidArgument("StochasticMatrix: columns must sum to 1");
    }
}

RVec local_fields(const RVec& s, const RVec& u, const RMat& j, const RVec& noise) { return -(u + noise) + j * s; }

BinaryConfig discrete_step(const BinaryConfig& s, const RnnParams& p, Rng& rng, std::size_t step) {
    p.validate();
    check_size(p, s.size(), "discrete_step");
    const RVec h = local_fields(s.as_vector(), p.bias(step), p.j, draw_noise(s.size(), p.sigma_in, rng));
    std::vector<int> out(static_cast<std::size_t>(s.size()));
    for (int i = 0; i < s.size(); ++i) out[static_cast<std::size_t>(i)] = sign_of(h(i) * s[i]);
    return BinaryConfig(std::move(out));
}

RMat continuous_integrate(const RVec& s0, const RnnParams& p, double duration, double dt, Rng& rng) {
    p.validate();
    check_size(p, s0.size(), "continuous_integrate");
    if (!(dt > 0.0) || dt >= p.tau) throw InvalidArgument("continuous_integrate: need 0 < dt < tau");
    if (duration < 0.0) throw InvalidArgument("continuous_integrate: negative duration");
    const long steps = std::lround(duration / dt);
    const int n = static_cast<int>(s0.size());
    RMat traj(steps + 1, n);
    RVec s = s0.cwiseMax(-1.0).cwiseMin(1.0);
    traj.row(0) = s.transpose();
    for (long k = 0; k < steps; ++k) {
        const RVec h = local_fields(s, p.bias(bias_index(k * dt, p.tau)), p.j, draw_noise(n, p.sigma_in, rng));
        RVec target(n);
        for (int i = 0; i < n; ++i) target(i) = sign_of(h(i) * s(i));
        s += (dt / p.tau) * (target - s);
        s = s.cwiseMax(-1.0).cwiseMin(1.0);
        traj.row(k + 1) = s.transpose();
    }
    return traj;
}

StochasticMatrix transition_matrix(const RnnParams& p, MarkovFormula formula, std::size_t step) {
    p.validate();
    const int n = p.size();
    if (n > 12) throw InvalidArgument("transition_matrix: N must be <= 12");
    if (!(p.sigma_in > 0.0)) throw InvalidArgument("transition_matrix: sigma_in must be positive");
    const Index d = Index{1} << n;
    const RVec& u = p.bias(step);
    RMat m(d, d);
    for (Index from = 0; from < d; ++from) {
        const RVec sp = BinaryConfig::from_index(n, from).as_vector();
        const RVec h = local_fields(sp, u, p.j, RVec::Zero(n));
        // Per-neuron probability of landing on +1.
        RVec up(n);
        for (int i = 0; i < n; ++i) {
            const double g = formula == MarkovFormula::update_rule
                                 ? sp(i) * std::erf(h(i) / (std::sqrt(2.0) * p.sigma_in))
                                 : std::erf((h(i) / (p.sigma_in * p.sigma_in) - 1.0) / std::sqrt(2.0));
            up(i) = 0.5 * (1.0 + g);
        }
        for (Index to = 0; to < d; ++to) {
            double prob = 1.0;
            for (int i = 0; i < n; ++i) prob *= ((to >> (n - 1 - i)) & 1) ? up(i) : 1.0 - up(i);
            m(to, from) = prob;
        }
    }
    return StochasticMatrix(std::move(m));
}

StochasticMatrix deterministic_transition(const RnnParams& p, std::size_t step) {
    p.validate();
    const int n = p.size();
    if (n > 12) throw InvalidArgument("deterministic_transition: N must be <= 12");
    RnnParams quiet = p;
    quiet.sigma_in = 0.0;
    Rng unused(0);
    const Index d = Index{1} << n;
    RMat m = RMat::Zero(d, d);
    for (Index from = 0; from < d; ++from) {
        m(discrete_step(BinaryConfig::from_index(n, from), quiet, unused, step).index(), from) = 1.0;
    }
    return StochasticMatrix(std::move(m));
}

bool embeddable_necessary(const StochasticMatrix& l) {
    constexpr double kSlack = 1e-12;
    const double det = l.entries().partialPivLu().determinant();
    const double diag = l.entries().diagonal().prod();
    return det >= -kSlack && diag >= det - kSlack;
}

StochasticMatrix spin_flip_matrix(int n) {
    if (n < 1 || n > 12) throw InvalidArgument("spin_flip_matrix: N must be in [1, 12]");
    const Index d = Index{1} << n;
    RMat m = RMat::Zero(d, d);
    for (Index s = 0; s < d; ++s) m(d - 1 - s, s) = 1.0;
    return StochasticMatrix(std::move(m));
}

StochasticMatrix channel_to_stochastic(const Channel& channel, BasisPtr basis) {
    constexpr double kTraceTol = 1e-8;
    const Index d = basis->dim();
    RMat m(d, d);
    for (Index s = 0; s < d; ++s) {
        const QuantumState out = channel(QuantumState::basis_state(basis, s).to_mixed());
        require_same_basis(out.basis(), *basis, "channel_to_stochastic");
        const CMat rho = out.density();
        for (Index t = 0; t < d; ++t) m(t, s) = rho(t, t).real();
        if (std::abs(m.col(s).sum() - 1.0) > kTraceTol) {
            throw NumericalError("channel_to_stochastic: channel is not trace preserving");
        }
    }
    // Populations are non-negative up to round-off.
    m = m.cwiseMax(0.0);
    return StochasticMatrix(std::move(m), kTraceTol);
}

MeanFieldTrajectory integrate_meanfield_ifrnn(const RVec& x0, const RVec& y0, const RnnParams& p, double omega,
                                              double gamma, double duration, double dt) {
    p.validate();
    check_size(p, x0.size(), "integrate_meanfield_ifrnn");
    check_size(p, y0.size(), "integrate_meanfield_ifrnn");
    if (gamma == 0.0) throw InvalidArgument("integrate_meanfield_ifrnn: gamma must be nonzero");
    if (!(dt > 0.0) || duration < 0.0) throw InvalidArgument("integrate_meanfield_ifrnn: bad time grid");
    const double inv_tau_i = gamma / 2.0;
    const double inv_tau_s = gamma / 2.0 + omega * omega / (4.0 * gamma);
    const double c = omega / (2.0 * gamma);
    const long steps = std::lround(duration / dt);
    MeanFieldTrajectory out{RVec(steps + 1), RMat(steps + 1, x0.size()), RMat(steps + 1, x0.size())};
    RVec x = x0, y = y0;
    for (long k = 0;; ++k) {
        out.times(k) = k * dt;
        out.x.row(k) = x.transpose();
        out.y.row(k) = y.transpose();
        if (k == steps) break;
        const RVec& d = p.bias(bias_index(k * dt, p.tau));
        const RVec jy = p.j * y;
        const RVec dx = -inv_tau_i * x - d.cwiseProduct(y) - c * y.cwiseProduct(jy);
        const RVec dy = -inv_tau_s * y + d.cwiseProduct(x) - c * x.cwiseProduct(jy);
        x += dt * dx;
        y += dt * dy;
    }
    return out;
}

}  // namespace qrc
