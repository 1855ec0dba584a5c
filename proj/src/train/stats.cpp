#include "qrc/train/stats.hpp"

#include "qrc/train/readout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace qrc {

double pearson_r_squared(const RVec& m, const RVec& y) {
    if (m.size() != y.size() || m.size() < 2) throw DimensionMismatch("pearson_r_squared");
    const RVec dm = m.array() - m.mean();
    const RVec dy = y.array() - y.mean();
    const double n = static_cast<double>(m.size());
    const double vm = dm.squaredNorm() / n, vy = dy.squaredNorm() / n;
    if (vm < 1e-14 || vy < 1e-14) return 0.0;
    const double c = dm.dot(dy) / n;
    return std::clamp(c * c / (vm * vy), 0.0, 1.0);
}

namespace {

RVec ranks(const RVec& a) {
    std::vector<Index> idx(static_cast<std::size_t>(a.size()));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Index x, Index y) { return a(x) < a(y); });
    RVec r(a.size());
    std::size_t i = 0;
    while (i < idx.size()) {
        std::size_t j = i;
        while (j + 1 < idx.size() && a(idx[j + 1]) == a(idx[i])) ++j;
        const double avg = 0.5 * static_cast<double>(i + j);
        for (std::size_t k = i; k <= j; ++k) r(idx[k]) = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

double spearman(const RVec& a, const RVec& b) {
    if (a.size() != b.size() || a.size() < 2) throw DimensionMismatch("spearman");
    const RVec ra = ranks(a), rb = ranks(b);
    const RVec da = ra.array() - ra.mean(), db = rb.array() - rb.mean();
    const double den = std::sqrt(da.squaredNorm() * db.squaredNorm());
    return den == 0.0 ? 0.0 : da.dot(db) / den;
}

double gaussian_perturb(double value, double sigma, Rng& rng) {
    if (sigma < 0.0) throw InvalidArgument("gaussian_perturb: sigma must be >= 0");
    if (sigma == 0.0) return value;
    std::normal_distribution<double> g(0.0, sigma);
    return value + g(rng);
}

double gaussian_perturb_nonnegative(double value, double sigma, Rng& rng) {
    if (value < 0.0) throw InvalidArgument("gaussian_perturb_nonnegative: negative mean");
    for (int attempt = 0; attempt < 10000; ++attempt) {
        const double v = gaussian_perturb(value, sigma, rng);
        if (v >= 0.0) return v;
    }
    throw NumericalError("gaussian_perturb_nonnegative: no non-negative draw");
}

double binomial_stderr(double p, long n) {
    if (n < 1) throw InvalidArgument("binomial_stderr: n must be positive");
    return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

double binomial_upper_tail(long k, long n, double p) {
    if (n < 0 || p < 0.0 || p > 1.0) throw InvalidArgument("binomial_upper_tail");
    if (k <= 0) return 1.0;
    if (k > n) return 0.0;
    double sum = 0.0;
    for (long i = k; i <= n; ++i) {
        const double log_term = std::lgamma(n + 1.0) - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) +
                                (i > 0 ? i * std::log(p) : 0.0) + (n - i > 0 ? (n - i) * std::log1p(-p) : 0.0);
        sum += std::exp(log_term);
    }
    return std::min(1.0, sum);
}

double LogisticFit::operator()(double c) const { return 1.0 / (1.0 + std::exp(-(c - midpoint) / scale)); }

LogisticFit fit_logistic(const RVec& c, const RVec& p, const RVec& weights) {
    if (c.size() != p.size() || c.size() < 2) throw DimensionMismatch("fit_logistic");
    const RVec w = weights.size() == 0 ? RVec::Ones(c.size()) : weights;
    if (w.size() != c.size()) throw DimensionMismatch("fit_logistic: weights");
    // fit in (rate, midpoint) so the sign of the slope is free
    auto rss = [&](const RVec& q) {
        double s = 0.0;
        for (Index i = 0; i < c.size(); ++i) {
            const double model = 1.0 / (1.0 + std::exp(-q(0) * (c(i) - q(1))));
            s += w(i) * (model - p(i)) * (model - p(i));
        }
        return s;
    };
    const double spread = c.maxCoeff() - c.minCoeff();
    RVec x0(2);
    x0 << (spread > 0 ? 4.0 / spread : 1.0), c.mean();
    NelderMeadOptions opt;
    opt.initial_step = 0.5 * (spread > 0 ? x0(0) : 1.0);
    opt.diameter_tol = 1e-8;
    opt.max_iterations = 5000;
    NelderMeadResult best = nelder_mead(rss, x0, opt);
    // restart once from the optimum to escape a collapsed simplex
    opt.initial_step = 0.1 * std::max(1.0, std::abs(best.x(0)));
    const NelderMeadResult again = nelder_mead(rss, best.x, opt);
    if (again.f < best.f) best = again;
    LogisticFit fit;
    fit.scale = 1.0 / best.x(0);
    fit.midpoint = best.x(1);
    fit.rss = best.f;
    return fit;
}

}  // namespace qrc
