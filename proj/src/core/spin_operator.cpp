#include "qrc/core/spin_operator.hpp"

#include <bit>
#include <cmath>

namespace qrc {

SpinOperator::SpinOperator(BasisPtr basis, const CMat& matrix, bool hermitian_hint)
    : basis_(std::move(basis)), storage_(matrix), hermitian_(hermitian_hint) {
    if (!basis_) throw InvalidArgument("SpinOperator: null basis");
    validate();
    normalize_storage();
}

SpinOperator::SpinOperator(BasisPtr basis, const SpMat& matrix, bool hermitian_hint)
    : basis_(std::move(basis)), storage_(matrix), hermitian_(hermitian_hint) {
    if (!basis_) throw InvalidArgument("SpinOperator: null basis");
    validate();
    normalize_storage();
}

void SpinOperator::validate() const {
    const Index d = basis_->dim();
    const auto [rows, cols] = std::visit([](const auto& m) { return std::pair{m.rows(), m.cols()}; }, storage_);
    if (rows != d || cols != d) {
        throw DimensionMismatch("SpinOperator: matrix is " + std::to_string(rows) + "x" + std::to_string(cols) +
                                " but basis has dimension " + std::to_string(d));
    }
    if (hermitian_) {
        const double defect = hermiticity_defect();
        if (!(defect < kHermitianTol)) {
            throw InvalidArgument("SpinOperator: hermitian_hint set but ||A - A^dag||_max = " +
                                  std::to_string(defect));
        }
    }
}

void SpinOperator::normalize_storage() {
    const bool want_dense = dim() < kDenseLimit;
    if (want_dense && !is_dense()) {
        storage_ = CMat(std::get<SpMat>(storage_));
    } else if (!want_dense && is_dense()) {
        SpMat s = std::get<CMat>(storage_).sparseView(1.0, 0.0);
        s.makeCompressed();
        storage_ = std::move(s);
    } else if (!want_dense) {
        std::get<SpMat>(storage_).prune(cplx(0.0, 0.0));
        std::get<SpMat>(storage_).makeCompressed();
    }
}

SpinOperator SpinOperator::zero(BasisPtr basis) {
    const Index d = basis->dim();
    if (d < kDenseLimit) return SpinOperator(basis, CMat::Zero(d, d), true);
    return SpinOperator(basis, SpMat(d, d), true);
}

SpinOperator SpinOperator::identity(BasisPtr basis) {
    return diagonal(basis, RVec::Ones(basis->dim()));
}

SpinOperator SpinOperator::diagonal(BasisPtr basis, const RVec& diag) {
    const Index d = basis->dim();
    if (diag.size() != d) throw DimensionMismatch("SpinOperator::diagonal: wrong length");
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) {
        if (diag(i) != 0.0) t.emplace_back(i, i, cplx(diag(i), 0.0));
    }
    return from_triplets(basis, t, true);
}

SpinOperator SpinOperator::from_triplets(BasisPtr basis, const std::vector<Eigen::Triplet<cplx>>& triplets,
                                         bool hermitian_hint) {
    const Index d = basis->dim();
    SpMat s(d, d);
    s.setFromTriplets(triplets.begin(), triplets.end());
    return SpinOperator(std::move(basis), s, hermitian_hint);
}

CMat SpinOperator::dense() const {
    if (is_dense()) return std::get<CMat>(storage_);
    return CMat(std::get<SpMat>(storage_));
}

SpMat SpinOperator::sparse() const {
    if (!is_dense()) return std::get<SpMat>(storage_);
    SpMat s = std::get<CMat>(storage_).sparseView(1.0, 0.0);
    s.makeCompressed();
    return s;
}

cplx SpinOperator::coeff(Index row, Index col) const {
    if (is_dense()) return std::get<CMat>(storage_)(row, col);
    return std::get<SpMat>(storage_).coeff(row, col);
}

CVec SpinOperator::apply(const CVec& v) const {
    if (v.size() != dim()) throw DimensionMismatch("SpinOperator::apply: vector length mismatch");
    return std::visit([&](const auto& m) -> CVec { return m * v; }, storage_);
}

CMat SpinOperator::left_multiply(const CMat& m) const {
    if (m.rows() != dim()) throw DimensionMismatch("SpinOperator::left_multiply: dimension mismatch");
    return std::visit([&](const auto& a) -> CMat { return a * m; }, storage_);
}

CMat SpinOperator::right_multiply(const CMat& m) const {
    if (m.cols() != dim()) throw DimensionMismatch("SpinOperator::right_multiply: dimension mismatch");
    return std::visit([&](const auto& a) -> CMat { return m * a; }, storage_);
}

SpinOperator SpinOperator::adjoint() const {
    if (is_dense()) return SpinOperator(basis_, CMat(std::get<CMat>(storage_).adjoint()), hermitian_);
    return SpinOperator(basis_, SpMat(std::get<SpMat>(storage_).adjoint()), hermitian_);
}

double SpinOperator::max_norm() const {
    if (is_dense()) return max_abs(std::get<CMat>(storage_));
    double m = 0.0;
    const auto& s = std::get<SpMat>(storage_);
    for (Index k = 0; k < s.outerSize(); ++k) {
        for (SpMat::InnerIterator it(s, k); it; ++it) m = std::max(m, std::abs(it.value()));
    }
    return m;
}

double SpinOperator::hermiticity_defect() const {
    if (std::holds_alternative<CMat>(storage_)) {
        const auto& m = std::get<CMat>(storage_);
        return max_abs(m - m.adjoint());
    }
    const auto& s = std::get<SpMat>(storage_);
    SpMat diff = s - SpMat(s.adjoint());
    double m = 0.0;
    for (Index k = 0; k < diff.outerSize(); ++k) {
        for (SpMat::InnerIterator it(diff, k); it; ++it) m = std::max(m, std::abs(it.value()));
    }
    return m;
}

SpinOperator SpinOperator::operator+(const SpinOperator& other) const {
    require_same_basis(*basis_, *other.basis_, "SpinOperator::operator+");
    const bool herm = hermitian_ && other.hermitian_;
    if (is_dense() && other.is_dense()) {
        return SpinOperator(basis_, CMat(std::get<CMat>(storage_) + std::get<CMat>(other.storage_)), herm);
    }
    return SpinOperator(basis_, SpMat(sparse() + other.sparse()), herm);
}

SpinOperator SpinOperator::operator-(const SpinOperator& other) const { return *this + other * (-1.0); }

SpinOperator SpinOperator::operator*(const SpinOperator& other) const {
    require_same_basis(*basis_, *other.basis_, "SpinOperator::operator*");
    if (is_dense() && other.is_dense()) {
        return SpinOperator(basis_, CMat(std::get<CMat>(storage_) * std::get<CMat>(other.storage_)), false);
    }
    return SpinOperator(basis_, SpMat(sparse() * other.sparse()), false);
}

SpinOperator SpinOperator::operator*(double s) const {
    if (is_dense()) return SpinOperator(basis_, CMat(std::get<CMat>(storage_) * s), hermitian_);
    return SpinOperator(basis_, SpMat(std::get<SpMat>(storage_) * cplx(s, 0.0)), hermitian_);
}

SpinOperator SpinOperator::operator*(cplx s) const {
    const bool herm = hermitian_ && s.imag() == 0.0;
    if (is_dense()) return SpinOperator(basis_, CMat(std::get<CMat>(storage_) * s), herm);
    return SpinOperator(basis_, SpMat(std::get<SpMat>(storage_) * s), herm);
}

SpinOperator SpinOperator::as_hermitian() const {
    if (is_dense()) return SpinOperator(basis_, std::get<CMat>(storage_), true);
    return SpinOperator(basis_, std::get<SpMat>(storage_), true);
}

// --------------------------------------------------------------------------

namespace {

void check_site(const HilbertBasis& b, int site) {
    if (site < 0 || site >= b.n_sites()) {
        throw InvalidArgument("site " + std::to_string(site) + " out of range for " + std::to_string(b.n_sites()) +
                              " sites");
    }
}

}  // namespace

SpinOperator build_pauli(BasisPtr basis, int site, Axis axis) {
    check_site(*basis, site);
    const Index d = basis->dim();
    const auto mask = basis->site_mask(site);
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) {
        const auto bits = basis->state(i);
        const bool up = (bits & mask) != 0;
        if (axis == Axis::z) {
            t.emplace_back(i, i, cplx(up ? 1.0 : -1.0, 0.0));
            continue;
        }
        const auto j = basis->index_of(bits ^ mask);
        if (!j) continue;
        // column i is the source configuration
        if (axis == Axis::x) {
            t.emplace_back(*j, i, cplx(1.0, 0.0));
        } else {
            // sigma^y |g> = -i |r>,  sigma^y |r> = i |g>
            t.emplace_back(*j, i, up ? kI : -kI);
        }
    }
    return SpinOperator::from_triplets(std::move(basis), t, true);
}

SpinOperator number_operator(BasisPtr basis, int site) {
    check_site(*basis, site);
    RVec diag(basis->dim());
    for (Index i = 0; i < basis->dim(); ++i) diag(i) = basis->excited(i, site) ? 1.0 : 0.0;
    return SpinOperator::diagonal(std::move(basis), diag);
}

SpinOperator total_number_operator(BasisPtr basis) {
    RVec diag(basis->dim());
    for (Index i = 0; i < basis->dim(); ++i) {
        diag(i) = static_cast<double>(std::popcount(basis->state(i)));
    }
    return SpinOperator::diagonal(std::move(basis), diag);
}

SpinOperator ground_projector(BasisPtr basis, int site) {
    check_site(*basis, site);
    RVec diag(basis->dim());
    for (Index i = 0; i < basis->dim(); ++i) diag(i) = basis->excited(i, site) ? 0.0 : 1.0;
    return SpinOperator::diagonal(std::move(basis), diag);
}

SpinOperator lowering_operator(BasisPtr basis, int site) {
    check_site(*basis, site);
    const auto mask = basis->site_mask(site);
    std::vector<Eigen::Triplet<cplx>> t;
    for (Index i = 0; i < basis->dim(); ++i) {
        const auto bits = basis->state(i);
        if ((bits & mask) == 0) continue;
        const auto j = basis->index_of(bits ^ mask);
        if (j) t.emplace_back(*j, i, cplx(1.0, 0.0));
    }
    return SpinOperator::from_triplets(std::move(basis), t, false);
}

Axis parse_axis(char c) {
    switch (c) {
        case 'x':
            return Axis::x;
        case 'y':
            return Axis::y;
        case 'z':
            return Axis::z;
        default:
            throw InvalidArgument(std::string("unknown axis '") + c + "'");
    }
}

}  // namespace qrc
