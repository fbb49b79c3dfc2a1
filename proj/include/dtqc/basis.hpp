#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dtqc {

/// Occupation pattern of an open chain; bit i set means site i is in |r>.
using Bits = std::uint32_t;

/// Largest supported chain. Fib(27) = 196418 configurations at the cap.
inline constexpr int max_sites = 25;

enum class Region { left, right };

struct SiteConfiguration {
    Bits bits = 0;
    int  n_sites = 0;

    [[nodiscard]] bool is_legal() const noexcept { return (bits & (bits >> 1)) == 0 && (n_sites >= 32 || (bits >> n_sites) == 0); }
    [[nodiscard]] bool occupied(int site) const noexcept { return (bits >> site) & 1U; }
    friend bool operator==(const SiteConfiguration &, const SiteConfiguration &) = default;
};

[[nodiscard]] inline bool blockade_legal(Bits bits) noexcept { return (bits & (bits >> 1)) == 0; }

/// Classical excitation count in sites [0, n_left) or [n_left, n_sites).
[[nodiscard]] int region_excitation_count(SiteConfiguration config, Region region, int n_left);

enum class NamedState { z2, z2prime, z3, ground };

[[nodiscard]] NamedState parse_named_state(std::string_view name);
[[nodiscard]] std::string_view to_string(NamedState state) noexcept;
[[nodiscard]] Bits named_pattern(NamedState state, int n_sites) noexcept;

/// Blockade-constrained Hilbert space of an open chain split into a left
/// block [0, n_left) and a right block [n_left, n_sites). Immutable once built.
class ConstrainedBasis {
public:
    ConstrainedBasis(int n_sites, int n_left);

    [[nodiscard]] int n_sites() const noexcept { return n_sites_; }
    [[nodiscard]] int n_left() const noexcept { return n_left_; }
    [[nodiscard]] int n_right() const noexcept { return n_sites_ - n_left_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return states_.size(); }

    [[nodiscard]] const std::vector<Bits> &states() const noexcept { return states_; }
    [[nodiscard]] Bits state(std::size_t k) const { return states_.at(k); }
    [[nodiscard]] SiteConfiguration configuration(std::size_t k) const { return {states_.at(k), n_sites_}; }

    /// Position of a pattern in `states()`, or nullopt for illegal/out-of-range patterns.
    [[nodiscard]] std::optional<std::size_t> index(Bits bits) const;

    /// Row permutation used for basis-overlap exports: ascending Hamming
    /// distance from the Z2 pattern, ties broken by bitmask value.
    [[nodiscard]] std::vector<std::size_t> heatmap_order() const;

    friend bool operator==(const ConstrainedBasis &a, const ConstrainedBasis &b) noexcept {
        return a.n_sites_ == b.n_sites_ && a.n_left_ == b.n_left_;
    }

private:
    int                                     n_sites_;
    int                                     n_left_;
    std::vector<Bits>                       states_;
    std::unordered_map<Bits, std::size_t>   index_;
};

[[nodiscard]] inline ConstrainedBasis enumerate_basis(int n_sites, int n_left) { return {n_sites, n_left}; }

/// Number of blockade-legal patterns on an open chain of n sites, Fib(n+2).
[[nodiscard]] std::size_t constrained_dimension(int n_sites) noexcept;

} // namespace dtqc
