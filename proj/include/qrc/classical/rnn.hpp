#pragma once

#include "qrc/common.hpp"
#include "qrc/core/basis.hpp"
#include "qrc/core/state.hpp"
#include "qrc/rng.hpp"

#include <functional>
#include <vector>

namespace qrc {

// Binary neuron configuration, entries exactly +1 or -1.
class BinaryConfig {
  public:
    explicit BinaryConfig(std::vector<int> bits);
    // Configuration index in the basis convention: site 0 is the most
    // significant bit, bit 1 means +1.
    static BinaryConfig from_index(int n, Index index);

    int size() const { return static_cast<int>(bits_.size()); }
    int operator[](int i) const { return bits_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& bits() const { return bits_; }
    Index index() const;
    RVec as_vector() const;

    bool operator==(const BinaryConfig& o) const { return bits_ == o.bits_; }

  private:
    std::vector<int> bits_;
};

struct RnnParams {
    RMat j;                      // symmetric, zero diagonal (rad/us)
    std::vector<RVec> biases;    // biases[k] is the input u at step k; the last entry persists
    double sigma_in = 0.0;       // std of the Gaussian input noise
    double tau = 1.0;            // relaxation time (us)

    int size() const { return static_cast<int>(j.rows()); }
    const RVec& bias(std::size_t step) const;
    void validate() const;
};

// Column-stochastic matrix over 2^N configurations; column = source.
class StochasticMatrix {
  public:
    static constexpr double kColumnTol = 1e-10;

    explicit StochasticMatrix(RMat entries, double column_tol = kColumnTol);

    Index dim() const { return m_.rows(); }
    const RMat& entries() const { return m_; }
    // P(to | from)
    double operator()(Index to, Index from) const { return m_(to, from); }

  private:
    RMat m_;
};

// Local field h_n = -(u_n + xi_n) + sum_m J_nm s_m for a given noise draw.
RVec local_fields(const RVec& s, const RVec& u, const RMat& j, const RVec& noise);

// One synchronous update s_n' = sign(h_n s_n), sign(0) = +1, with fresh
// noise per neuron.
BinaryConfig discrete_step(const BinaryConfig& s, const RnnParams& p, Rng& rng, std::size_t step = 0);

// Euler integration of tau ds/dt = -s + sign(h s), clipped to [-1, 1].
// Noise is redrawn every Euler step; the bias index is floor(t / tau).
// Returns n_steps + 1 rows, one per time point.
RMat continuous_integrate(const RVec& s0, const RnnParams& p, double duration, double dt, Rng& rng);

enum class MarkovFormula {
    // P(s|s') = prod_i (1 + s_i s'_i erf(h_i(s') / (sqrt2 sigma))) / 2
    update_rule,
    // prod_i (1 + s_i erf((h_i(s')/sigma^2 - 1) / sqrt2)) / 2, no s'_i factor
    alternate,
};

StochasticMatrix transition_matrix(const RnnParams& p, MarkovFormula formula = MarkovFormula::update_rule,
                                   std::size_t step = 0);
// Noise-free limit: the 0/1 matrix of the deterministic update.
StochasticMatrix deterministic_transition(const RnnParams& p, std::size_t step = 0);

// Necessary condition for classical embeddability: prod_s L_ss >= det L >= 0.
bool embeddable_necessary(const StochasticMatrix& l);

// Global spin flip: F(s|s') = 1 iff s = -s'.
StochasticMatrix spin_flip_matrix(int n);

using Channel = std::function<QuantumState(const QuantumState&)>;

// L(s'|s) = <s'| E(|s><s|) |s'>. Throws NumericalError if a column sum is
// off by more than 1e-8.
StochasticMatrix channel_to_stochastic(const Channel& channel, BasisPtr basis);

struct MeanFieldTrajectory {
    RVec times;
    RMat x;  // <sigma^x>, one row per time
    RMat y;  // <sigma^y>
};

// Mean-field closure of the dissipative spin equations:
//   x' = -(g/2) x - D y - (W/2g) sum_m J_nm y_n y_m
//   y' = -(g/2 + W^2/4g) y + D x - (W/2g) sum_m J_nm x_n y_m
MeanFieldTrajectory integrate_meanfield_ifrnn(const RVec& x0, const RVec& y0, const RnnParams& p, double omega,
                                              double gamma, double duration, double dt);

}  // namespace qrc
