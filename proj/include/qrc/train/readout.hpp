#pragma once

#include "qrc/common.hpp"
#include "qrc/core/state.hpp"
#include "qrc/rng.hpp"

#include <functional>
#include <vector>

namespace qrc {

enum class Observable { x, y, z, population };

Observable parse_observable(const std::string& s);

// Per-site expectations followed by a bias entry of exactly 1. The
// population observable contributes (P_g, P_r) per site.
RVec extract_features(const QuantumState& state, const std::vector<int>& sites, Observable obs);
// Same, straight from a density matrix on `basis`.
RVec extract_features(const HilbertBasis& basis, const CMat& rho, const std::vector<int>& sites, Observable obs);

// Features (one row per sample, last column = bias) and targets.
struct Dataset {
    RMat features;
    RMat targets;

    Index size() const { return features.rows(); }
    void validate() const;
    Dataset subset(const std::vector<Index>& rows) const;
};

class ReadoutMap {
  public:
    ReadoutMap() = default;
    explicit ReadoutMap(RMat weights);

    // outputs x (M + 1)
    const RMat& weights() const { return w_; }
    // One row per sample.
    RMat predict(const RMat& features) const;

  private:
    RMat w_;
};

inline constexpr double kDefaultRidge = 1e-8;

// argmin_W ‖F W^T - Y‖^2 + ridge ‖W‖^2 via the normal equations.
ReadoutMap fit_readout(const Dataset& d, double ridge = kDefaultRidge);

// (1/N) sum_i ‖y_targ,i - y_out,i‖^2 over rows.
double square_loss(const RMat& y_out, const RMat& y_targ);

struct NelderMeadOptions {
    double initial_step = 0.1;
    double diameter_tol = 1e-4;
    // Stop when max f - min f over the simplex is at most this.
    double f_tol = 0.0;
    int max_iterations = 500;
};

struct NelderMeadResult {
    RVec x;
    double f = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Standard simplex search: reflection 1, expansion 2, contraction 1/2,
// shrink 1/2.
NelderMeadResult nelder_mead(const std::function<double(const RVec&)>& f, const RVec& x0,
                             const NelderMeadOptions& options = {});

// Seeded random split: a permutation of [0, n) whose first
// round(fraction * n) entries are the training rows.
struct Split {
    std::vector<Index> train;
    std::vector<Index> test;
};
Split train_test_split(Index n, double train_fraction, Rng& rng);

}  // namespace qrc
