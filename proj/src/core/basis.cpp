#include "qrc/core/basis.hpp"

#include <map>
#include <mutex>

namespace qrc {

std::string to_string(BasisKind kind) {
    switch (kind) {
        case BasisKind::full:
            return "full";
        case BasisKind::blockaded_ring:
            return "blockaded-ring";
        case BasisKind::blockaded_chain:
            return "blockaded-chain";
    }
    return "unknown";
}

HilbertBasis::HilbertBasis(BasisKind kind, int n_sites) : kind_(kind), n_sites_(n_sites) {
    if (n_sites < 1 || n_sites > kMaxSites) {
        throw InvalidArgument("HilbertBasis: n_sites must be in [1, " + std::to_string(kMaxSites) + "]");
    }
    const Bits total = Bits{1} << n_sites;
    lookup_.assign(total, -1);
    for (Bits b = 0; b < total; ++b) {
        if (admissible(b)) {
            lookup_[b] = static_cast<std::int64_t>(states_.size());
            states_.push_back(b);
        }
    }
}

bool HilbertBasis::admissible(Bits bits) const {
    if (n_sites_ < 32 && (bits >> n_sites_) != 0) return false;
    if (kind_ == BasisKind::full) return true;
    // Adjacent sites n, n+1 map to adjacent bits, so a shifted AND finds pairs.
    if ((bits & (bits >> 1)) != 0) return false;
    if (kind_ == BasisKind::blockaded_ring && n_sites_ > 2) {
        // site 0 is the top bit, site n-1 the bottom bit
        const bool first = (bits & site_mask(0)) != 0;
        const bool last = (bits & site_mask(n_sites_ - 1)) != 0;
        if (first && last) return false;
    }
    return true;
}

BasisPtr HilbertBasis::make(BasisKind kind, int n_sites) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, BasisPtr> cache;
    std::lock_guard lock(mutex);
    const auto key = std::make_pair(static_cast<int>(kind), n_sites);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    BasisPtr basis(new HilbertBasis(kind, n_sites));
    cache.emplace(key, basis);
    return basis;
}

BasisPtr HilbertBasis::full(int n_sites) { return make(BasisKind::full, n_sites); }
BasisPtr HilbertBasis::blockaded_ring(int n_sites) { return make(BasisKind::blockaded_ring, n_sites); }
BasisPtr HilbertBasis::blockaded_chain(int n_sites) { return make(BasisKind::blockaded_chain, n_sites); }

std::optional<Index> HilbertBasis::index_of(Bits bits) const {
    if (n_sites_ < 32 && (bits >> n_sites_) != 0) return std::nullopt;
    const auto v = lookup_[bits];
    if (v < 0) return std::nullopt;
    return static_cast<Index>(v);
}

HilbertBasis::Bits HilbertBasis::site_mask(int site) const {
    if (site < 0 || site >= n_sites_) {
        throw InvalidArgument("site " + std::to_string(site) + " out of range for " +
                              std::to_string(n_sites_) + " sites");
    }
    return Bits{1} << (n_sites_ - 1 - site);
}

std::string HilbertBasis::label(Index i) const {
    std::string out(static_cast<std::size_t>(n_sites_), 'g');
    for (int s = 0; s < n_sites_; ++s) {
        if (excited(i, s)) out[static_cast<std::size_t>(s)] = 'r';
    }
    return out;
}

HilbertBasis::Bits HilbertBasis::parse_label(std::string_view label) const {
    if (static_cast<int>(label.size()) != n_sites_) {
        throw InvalidArgument("configuration label '" + std::string(label) + "' has wrong length");
    }
    Bits bits = 0;
    for (int s = 0; s < n_sites_; ++s) {
        const char c = label[static_cast<std::size_t>(s)];
        if (c == 'r' || c == '1') {
            bits |= site_mask(s);
        } else if (c != 'g' && c != '0') {
            throw InvalidArgument("configuration label '" + std::string(label) + "' must use g/r");
        }
    }
    return bits;
}

Index HilbertBasis::index_of_label(std::string_view label) const {
    auto idx = index_of(parse_label(label));
    if (!idx) throw InvalidArgument("configuration '" + std::string(label) + "' is not in the basis");
    return *idx;
}

void require_same_basis(const HilbertBasis& a, const HilbertBasis& b, const char* where) {
    if (!(a == b)) {
        throw DimensionMismatch(std::string(where) + ": basis mismatch (" + to_string(a.kind()) + "/" +
                                std::to_string(a.n_sites()) + " vs " + to_string(b.kind()) + "/" +
                                std::to_string(b.n_sites()) + ")");
    }
}

}  // namespace qrc
