#pragma once

#include "qrc/common.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace qrc {

enum class BasisKind { full, blockaded_ring, blockaded_chain };

std::string to_string(BasisKind kind);

// Computational basis of n spin-1/2 sites. A configuration is stored as an
// integer whose most significant bit (of n) is site 0, so integer order is
// lexicographic order over (site 0, site 1, ...). Bit value 1 is |r> (+1),
// bit value 0 is |g> (-1).
class HilbertBasis {
  public:
    using Bits = std::uint32_t;
    static constexpr int kMaxSites = 20;

    static std::shared_ptr<const HilbertBasis> full(int n_sites);
    static std::shared_ptr<const HilbertBasis> blockaded_ring(int n_sites);
    static std::shared_ptr<const HilbertBasis> blockaded_chain(int n_sites);
    static std::shared_ptr<const HilbertBasis> make(BasisKind kind, int n_sites);

    int n_sites() const { return n_sites_; }
    BasisKind kind() const { return kind_; }
    Index dim() const { return static_cast<Index>(states_.size()); }
    bool is_full() const { return kind_ == BasisKind::full; }

    Bits state(Index i) const { return states_[static_cast<std::size_t>(i)]; }
    const std::vector<Bits>& states() const { return states_; }

    // Index of a configuration, or nullopt if it is not admissible.
    std::optional<Index> index_of(Bits bits) const;

    Bits site_mask(int site) const;
    bool excited(Index i, int site) const { return (state(i) & site_mask(site)) != 0; }
    // Spin value s = +1 for r, -1 for g.
    int spin(Index i, int site) const { return excited(i, site) ? 1 : -1; }

    // "grgr..." labels, site 0 first.
    std::string label(Index i) const;
    Bits parse_label(std::string_view label) const;
    Index index_of_label(std::string_view label) const;

    bool admissible(Bits bits) const;

    bool operator==(const HilbertBasis& other) const {
        return kind_ == other.kind_ && n_sites_ == other.n_sites_;
    }

  private:
    HilbertBasis(BasisKind kind, int n_sites);

    BasisKind kind_;
    int n_sites_;
    std::vector<Bits> states_;
    std::vector<std::int64_t> lookup_;  // 2^n entries, -1 when inadmissible
};

using BasisPtr = std::shared_ptr<const HilbertBasis>;

void require_same_basis(const HilbertBasis& a, const HilbertBasis& b, const char* where);

}  // namespace qrc
