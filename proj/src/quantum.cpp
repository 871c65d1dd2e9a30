#include "qrlab/quantum.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

namespace qrlab {

Superposition::Superposition(std::vector<Branch> branches) : branches_(std::move(branches)) {
    if (branches_.empty()) {
        throw std::invalid_argument("superposition needs at least one branch");
    }
    std::unordered_set<std::string> seen;
    seen.reserve(branches_.size());
    for (const Branch& b : branches_) {
        if (!std::isfinite(b.amplitude.modulus) || b.amplitude.modulus < 0.0) {
            throw std::invalid_argument("branch '" + b.label +
                                        "' needs a finite non-negative modulus");
        }
        if (!std::isfinite(b.amplitude.phase) || !std::isfinite(b.valence)) {
            throw std::invalid_argument("branch '" + b.label + "' has a non-finite field");
        }
        if (!seen.insert(b.label).second) {
            throw std::invalid_argument("duplicate branch label '" + b.label + "'");
        }
    }
}

double Superposition::total_probability() const noexcept {
    double total = 0.0;
    for (const Branch& b : branches_) total += b.probability();
    return total;
}

bool Superposition::is_normalized(double tolerance) const noexcept {
    return std::abs(total_probability() - 1.0) <= tolerance;
}

Superposition normalize(const Superposition& s) {
    const double total = s.total_probability();
    if (total <= 0.0) {
        throw AllZeroAmplitudes("cannot normalize: every branch has zero modulus");
    }
    const double scale = 1.0 / std::sqrt(total);
    std::vector<Branch> scaled = s.branches();
    for (Branch& b : scaled) b.amplitude.modulus *= scale;
    return Superposition(std::move(scaled));
}

std::vector<std::pair<std::string, double>> born_probabilities(const Superposition& s) {
    std::vector<std::pair<std::string, double>> out;
    out.reserve(s.size());
    for (const Branch& b : s.branches()) out.emplace_back(b.label, b.probability());
    return out;
}

Branch reduce(const Superposition& s, RandomStream& rng) {
    const double total = s.total_probability();
    if (total <= 0.0) {
        throw AllZeroAmplitudes("cannot reduce: every branch has zero modulus");
    }
    // One draw, one inverse-CDF pass in branch order.  Scaling the draw by
    // the total lets slightly-off-unit states sample proportionally instead
    // of failing on rounding dust.
    const double target = rng.next_unit() * total;
    double cumulative = 0.0;
    const Branch* last_positive = nullptr;
    for (const Branch& b : s.branches()) {
        const double p = b.probability();
        if (p > 0.0) last_positive = &b;
        cumulative += p;
        if (target < cumulative) return b;
    }
    // Only reachable through floating-point shortfall at the far end of the
    // CDF; the final branch with mass is the correct pick.
    return *last_positive;
}

ObserverChain::ObserverChain(std::vector<ChainEntry> entries, std::vector<Amplitude> amplitudes,
                             std::size_t index_space)
    : entries_(std::move(entries)), amplitudes_(std::move(amplitudes)), index_space_(index_space) {}

ObserverChain ObserverChain::correlated(std::vector<Amplitude> amplitudes) {
    if (amplitudes.empty()) {
        throw AllZeroAmplitudes("observer chain needs at least one amplitude");
    }
    bool any_mass = false;
    for (const Amplitude& a : amplitudes) {
        if (!std::isfinite(a.modulus) || a.modulus < 0.0) {
            throw std::invalid_argument("chain amplitude needs a finite non-negative modulus");
        }
        any_mass = any_mass || a.modulus > 0.0;
    }
    if (!any_mass) {
        throw AllZeroAmplitudes("observer chain needs at least one nonzero amplitude");
    }
    std::vector<ChainEntry> entries(amplitudes.size());
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i] = {i, i, i};
    return ObserverChain(std::move(entries), std::move(amplitudes), entries.size());
}

ObserverChain first_reduction(const ObserverChain& chain, std::size_t k) {
    if (k >= chain.size()) {
        throw IndexOutOfRange("first reduction index " + std::to_string(k) +
                              " out of range for " + std::to_string(chain.size()) + " entries");
    }
    // The surviving term keeps its original coefficient; no renormalization.
    return ObserverChain({chain.entries()[k]}, {chain.amplitudes()[k]}, chain.index_space());
}

std::optional<ObserverChain> second_reduction(const ObserverChain& chain, std::size_t m) {
    if (m >= chain.index_space()) {
        throw IndexOutOfRange("second reduction index " + std::to_string(m) +
                              " out of range for index space " +
                              std::to_string(chain.index_space()));
    }
    std::vector<ChainEntry> entries;
    std::vector<Amplitude> amplitudes;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (chain.entries()[i].second_observer == m) {
            entries.push_back(chain.entries()[i]);
            amplitudes.push_back(chain.amplitudes()[i]);
        }
    }
    if (entries.empty()) return std::nullopt;  // delta_{km} = 0: a null event
    return ObserverChain(std::move(entries), std::move(amplitudes), chain.index_space());
}

}  // namespace qrlab
