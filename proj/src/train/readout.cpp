#include "qrc/train/readout.hpp"

#include "qrc/core/measures.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qrc {

Observable parse_observable(const std::string& s) {
    if (s == "x") return Observable::x;
    if (s == "y") return Observable::y;
    if (s == "z") return Observable::z;
    if (s == "population") return Observable::population;
    throw InvalidArgument("unknown observable '" + s + "'");
}

namespace {

template <typename Rho>
RVec features_impl(const HilbertBasis& basis, const Rho& rho, const std::vector<int>& sites, Observable obs) {
    if (sites.empty()) throw InvalidArgument("extract_features: no sites");
    const Index per = obs == Observable::population ? 2 : 1;
    RVec f(static_cast<Index>(sites.size()) * per + 1);
    Index k = 0;
    for (int s : sites) {
        const auto b = bloch_vector(basis, rho, s);
        switch (obs) {
            case Observable::x: f(k++) = b[0]; break;
            case Observable::y: f(k++) = b[1]; break;
            case Observable::z: f(k++) = b[2]; break;
            case Observable::population:
                f(k++) = 0.5 * (1.0 - b[2]);
                f(k++) = 0.5 * (1.0 + b[2]);
                break;
        }
    }
    f(k) = 1.0;
    return f;
}

}  // namespace

RVec extract_features(const QuantumState& state, const std::vector<int>& sites, Observable obs) {
    if (state.is_pure()) return features_impl(state.basis(), state.amplitudes(), sites, obs);
    return features_impl(state.basis(), state.density(), sites, obs);
}

RVec extract_features(const HilbertBasis& basis, const CMat& rho, const std::vector<int>& sites, Observable obs) {
    if (rho.rows() != basis.dim() || rho.cols() != basis.dim()) throw DimensionMismatch("extract_features");
    return features_impl(basis, rho, sites, obs);
}

void Dataset::validate() const {
    if (features.rows() != targets.rows()) throw DimensionMismatch("Dataset: row counts differ");
    if (features.rows() < 1 || features.cols() < 1 || targets.cols() < 1) throw InvalidArgument("Dataset: empty");
    if (!features.allFinite() || !targets.allFinite()) throw NumericalError("Dataset: non-finite entries");
}

Dataset Dataset::subset(const std::vector<Index>& rows) const {
    Dataset out{RMat(static_cast<Index>(rows.size()), features.cols()), RMat(static_cast<Index>(rows.size()), targets.cols())};
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.features.row(static_cast<Index>(i)) = features.row(rows[i]);
        out.targets.row(static_cast<Index>(i)) = targets.row(rows[i]);
    }
    return out;
}

ReadoutMap::ReadoutMap(RMat weights) : w_(std::move(weights)) {
    if (!w_.allFinite()) throw NumericalError("ReadoutMap: non-finite weights");
}

RMat ReadoutMap::predict(const RMat& features) const {
    if (features.cols() != w_.cols()) throw DimensionMismatch("ReadoutMap::predict: feature width");
    return features * w_.transpose();
}

ReadoutMap fit_readout(const Dataset& d, double ridge) {
    d.validate();
    if (ridge < 0.0) throw InvalidArgument("fit_readout: ridge must be >= 0");
    const RMat& f = d.features;
    RMat gram = f.transpose() * f;
    if (ridge == 0.0) {
        Eigen::FullPivLU<RMat> lu(gram);
        if (lu.rank() < gram.rows()) throw NumericalError("fit_readout: degenerate feature matrix with ridge = 0");
    }
    gram.diagonal().array() += ridge;
    Eigen::LDLT<RMat> ldlt(gram);
    if (ldlt.info() != Eigen::Success) throw NumericalError("fit_readout: normal equations failed");
    const RMat wt = ldlt.solve(f.transpose() * d.targets);
    return ReadoutMap(wt.transpose());
}

double square_loss(const RMat& y_out, const RMat& y_targ) {
    if (y_out.rows() != y_targ.rows() || y_out.cols() != y_targ.cols()) throw DimensionMismatch("square_loss");
    if (y_out.rows() == 0) throw InvalidArgument("square_loss: no samples");
    return (y_targ - y_out).squaredNorm() / static_cast<double>(y_out.rows());
}

NelderMeadResult nelder_mead(const std::function<double(const RVec&)>& f, const RVec& x0,
                             const NelderMeadOptions& options) {
    const Index n = x0.size();
    if (n < 1) throw InvalidArgument("nelder_mead: empty start point");
    std::vector<RVec> pts{x0};
    for (Index i = 0; i < n; ++i) {
        RVec p = x0;
        p(i) += options.initial_step;
        pts.push_back(p);
    }
    std::vector<double> vals;
    for (const auto& p : pts) vals.push_back(f(p));
    std::vector<std::size_t> order(pts.size());

    NelderMeadResult out;
    auto sort_simplex = [&] {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        std::vector<RVec> p2;
        std::vector<double> v2;
        for (auto i : order) {
            p2.push_back(pts[i]);
            v2.push_back(vals[i]);
        }
        pts = std::move(p2);
        vals = std::move(v2);
    };
    auto diameter = [&] {
        double d = 0.0;
        for (std::size_t i = 1; i < pts.size(); ++i) d = std::max(d, (pts[i] - pts[0]).norm());
        return d;
    };

    sort_simplex();
    for (;;) {
        if (diameter() < options.diameter_tol || vals.back() - vals.front() <= options.f_tol) {
            out.converged = true;
            break;
        }
        if (out.iterations >= options.max_iterations) break;
        ++out.iterations;
        RVec centroid = RVec::Zero(n);
        for (Index i = 0; i < n; ++i) centroid += pts[static_cast<std::size_t>(i)];
        centroid /= static_cast<double>(n);
        const RVec& worst = pts.back();
        const RVec xr = centroid + (centroid - worst);
        const double fr = f(xr);
        if (fr < vals.front()) {
            const RVec xe = centroid + 2.0 * (centroid - worst);
            const double fe = f(xe);
            if (fe < fr) {
                pts.back() = xe;
                vals.back() = fe;
            } else {
                pts.back() = xr;
                vals.back() = fr;
            }
        } else if (fr < vals[vals.size() - 2]) {
            pts.back() = xr;
            vals.back() = fr;
        } else {
            const bool outside = fr < vals.back();
            const RVec xc = outside ? RVec(centroid + 0.5 * (xr - centroid)) : RVec(centroid + 0.5 * (worst - centroid));
            const double fc = f(xc);
            if (fc < (outside ? fr : vals.back())) {
                pts.back() = xc;
                vals.back() = fc;
            } else {
                for (std::size_t i = 1; i < pts.size(); ++i) {
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0]);
                    vals[i] = f(pts[i]);
                }
            }
        }
        sort_simplex();
    }
    out.x = pts.front();
    out.f = vals.front();
    return out;
}

Split train_test_split(Index n, double train_fraction, Rng& rng) {
    if (n < 2 || !(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InvalidArgument("train_test_split: need n >= 2 and fraction in (0, 1)");
    }
    std::vector<Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    for (Index i = n - 1; i > 0; --i) {
        std::uniform_int_distribution<Index> pick(0, i);
        std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(pick(rng))]);
    }
    const Index n_train = std::clamp<Index>(std::llround(train_fraction * static_cast<double>(n)), 1, n - 1);
    Split s;
    s.train.assign(perm.begin(), perm.begin() + n_train);
    s.test.assign(perm.begin() + n_train, perm.end());
    return s;
}

}  // namespace qrc
