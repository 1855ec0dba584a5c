#pragma once

#include "qrc/common.hpp"
#include "qrc/rng.hpp"

namespace qrc {

// cov(m, y)^2 / (var m var y); 0 when either variance is below 1e-14.
double pearson_r_squared(const RVec& m, const RVec& y);

// Spearman rank correlation with average ranks for ties.
double spearman(const RVec& a, const RVec& b);

double gaussian_perturb(double value, double sigma, Rng& rng);
// Redraws until the result is non-negative; used for durations.
double gaussian_perturb_nonnegative(double value, double sigma, Rng& rng);

double binomial_stderr(double p, long n);
// P(X >= k) for X ~ Binomial(n, p).
double binomial_upper_tail(long k, long n, double p);

// p(c) = 1 / (1 + exp(-(c - midpoint) / scale)), least squares in (scale,
// midpoint). slope() is the derivative at the midpoint.
struct LogisticFit {
    double scale = 1.0;
    double midpoint = 0.0;
    double rss = 0.0;

    double operator()(double c) const;
    double slope() const { return 0.25 / scale; }
};

LogisticFit fit_logistic(const RVec& c, const RVec& p, const RVec& weights = RVec());

}  // namespace qrc
