#include "dtqc/basis.hpp"

#include "dtqc/error.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

namespace dtqc {

int region_excitation_count(SiteConfiguration config, Region region, int n_left) {
    const Bits left_mask = n_left >= 32 ? ~Bits{0} : (Bits{1} << n_left) - 1U;
    const Bits masked    = region == Region::left ? (config.bits & left_mask) : (config.bits & ~left_mask);
    return std::popcount(masked);
}

NamedState parse_named_state(std::string_view name) {
    if(name == "Z2" or name == "z2") return NamedState::z2;
    if(name == "Z2prime" or name == "z2prime" or name == "Z2'") return NamedState::z2prime;
    if(name == "Z3" or name == "z3") return NamedState::z3;
    if(name == "ground") return NamedState::ground;
    throw Error(ErrorKind::naming, "unknown named state '" + std::string(name) + "' (expected Z2, Z2prime, Z3 or ground)");
}

std::string_view to_string(NamedState state) noexcept {
    switch(state) {
        case NamedState::z2: return "Z2";
        case NamedState::z2prime: return "Z2prime";
        case NamedState::z3: return "Z3";
        case NamedState::ground: return "ground";
    }
    return "?";
}

Bits named_pattern(NamedState state, int n_sites) noexcept {
    int first = 0, stride = 1;
    switch(state) {
        case NamedState::ground: return 0;
        case NamedState::z2: first = 0, stride = 2; break;
        case NamedState::z2prime: first = 1, stride = 2; break;
        case NamedState::z3: first = 0, stride = 3; break;
    }
    Bits bits = 0;
    for(int i = first; i < n_sites; i += stride) bits |= Bits{1} << i;
    return bits;
}

std::size_t constrained_dimension(int n_sites) noexcept {
    // a = Fib(k), b = Fib(k+1); the count for n sites is Fib(n+2)
    std::size_t a = 1, b = 1;
    for(int k = 1; k < n_sites + 2; ++k) {
        auto next = a + b;
        a         = b;
        b         = next;
    }
    return a;
}

ConstrainedBasis::ConstrainedBasis(int n_sites, int n_left) : n_sites_(n_sites), n_left_(n_left) {
    if(n_sites < 2 or n_sites > max_sites)
        throw Error(ErrorKind::size, "n_sites = " + std::to_string(n_sites) + " outside [2, " + std::to_string(max_sites) + "]");
    if(n_left < 1 or n_left >= n_sites)
        throw Error(ErrorKind::partition, "n_left = " + std::to_string(n_left) + " must satisfy 1 <= n_left < n_sites = " + std::to_string(n_sites));

    // Grow legal patterns site by site: a pattern may take bit s only if bit s-1 is clear.
    std::vector<Bits> current{0};
    current.reserve(constrained_dimension(n_sites));
    for(int s = 0; s < n_sites; ++s) {
        std::vector<Bits> next = current;
        for(Bits b : current)
            if(s == 0 or ((b >> (s - 1)) & 1U) == 0) next.push_back(b | (Bits{1} << s));
        current = std::move(next);
    }
    states_ = std::move(current);
    std::sort(states_.begin(), states_.end());
    index_.reserve(states_.size());
    for(std::size_t k = 0; k < states_.size(); ++k) index_.emplace(states_[k], k);
}

std::optional<std::size_t> ConstrainedBasis::index(Bits bits) const {
    auto it = index_.find(bits);
    if(it == index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::size_t> ConstrainedBasis::heatmap_order() const {
    const Bits               z2 = named_pattern(NamedState::z2, n_sites_);
    std::vector<std::size_t> order(states_.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const int da = std::popcount(states_[a] ^ z2);
        const int db = std::popcount(states_[b] ^ z2);
        if(da != db) return da < db;
        return states_[a] < states_[b];
    });
    return order;
}

} // namespace dtqc
