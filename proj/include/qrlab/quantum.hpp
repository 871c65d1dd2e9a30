#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qrlab/errors.hpp"
#include "qrlab/rng.hpp"

namespace qrlab {

/// Polar amplitude of one branch.
///
/// The model works in the fully incoherent regime: each branch has a
/// definite but arbitrary phase, and no operation ever interferes two
/// branches, so only modulus^2 can reach an observable.  The phase is
/// stored as plain data for completeness and round-tripping.
struct Amplitude {
    double modulus = 0.0;  // >= 0
    double phase = 0.0;    // radians, physically inert here

    double probability() const noexcept { return modulus * modulus; }

    friend bool operator==(const Amplitude&, const Amplitude&) = default;
};

enum class OriginKind : std::uint8_t { External, CMInternal };

/// Provenance tag of a branch: either imposed from outside the organism, or
/// created internally by a central mechanism (cm_id) as one member of a
/// grouped superposition (group_id).  The scoped bias variant keys its
/// conservation rule on the (cm_id, group_id) pair; the unscoped variant
/// ignores the tag entirely.
struct Origin {
    OriginKind kind = OriginKind::External;
    std::uint32_t cm_id = 0;     // meaningful only when kind == CMInternal
    std::uint32_t group_id = 0;  // ditto

    static Origin external() noexcept { return {}; }
    static Origin cm_internal(std::uint32_t cm, std::uint32_t group) noexcept {
        return {OriginKind::CMInternal, cm, group};
    }

    friend bool operator==(const Origin&, const Origin&) = default;
};

/// One alternative in a superposed state: a labelled amplitude plus the
/// subjective quality attached to experiencing that alternative.  Valence is
/// a signed scalar where 0 is neutral and larger values are more aversive.
struct Branch {
    std::string label;
    Amplitude amplitude;
    double valence = 0.0;
    Origin origin;

    double probability() const noexcept { return amplitude.probability(); }
};

/// An ordered, finite, incoherent superposition.
///
/// Construction validates structure only: at least one branch, unique
/// labels, finite non-negative moduli, finite valences.  Unit norm is a
/// separate concern restored explicitly through normalize(); sampling
/// operations state their own norm requirements.
class Superposition {
public:
    explicit Superposition(std::vector<Branch> branches);

    const std::vector<Branch>& branches() const noexcept { return branches_; }
    std::size_t size() const noexcept { return branches_.size(); }
    const Branch& operator[](std::size_t i) const { return branches_.at(i); }

    /// Sum of squared moduli over all branches.
    double total_probability() const noexcept;

    bool is_normalized(double tolerance = 1e-12) const noexcept;

private:
    std::vector<Branch> branches_;
};

/// Rescales all moduli by a common factor so the squared moduli sum to 1.
/// Labels, phases, valences and origins are preserved, as are all pairwise
/// modulus ratios.  Throws AllZeroAmplitudes when there is nothing to scale.
Superposition normalize(const Superposition& s);

/// The (label, probability) list in branch order, probability = modulus^2.
std::vector<std::pair<std::string, double>> born_probabilities(const Superposition& s);

/// Samples one branch with probability proportional to its squared modulus
/// and returns a copy of it.  Consumes exactly one uniform draw from the
/// stream (single inverse-CDF pass in branch order), so a given stream state
/// always selects the same branch.  Throws AllZeroAmplitudes when every
/// branch has zero probability.
Branch reduce(const Superposition& s, RandomStream& rng);

/// One correlated entry of an apparatus/observer/confirming-observer state.
/// Index i means "apparatus variable a_i / first observer registered a_i /
/// second observer registered a_i"; the tensor structure of the chain is
/// fully captured by this index tupling.
struct ChainEntry {
    std::size_t apparatus = 0;
    std::size_t first_observer = 0;
    std::size_t second_observer = 0;

    friend bool operator==(const ChainEntry&, const ChainEntry&) = default;
};

/// A finite measured-system state shared by an apparatus and two observers,
/// entry i carrying coefficient amplitudes()[i].  Freshly prepared chains
/// are perfectly correlated: every entry has all three indices equal.
class ObserverChain {
public:
    /// Builds the fully correlated chain with entries (i, i, i),
    /// i = 0 .. amplitudes.size()-1.  Throws AllZeroAmplitudes on an empty
    /// or all-zero amplitude list.
    static ObserverChain correlated(std::vector<Amplitude> amplitudes);

    const std::vector<ChainEntry>& entries() const noexcept { return entries_; }
    const std::vector<Amplitude>& amplitudes() const noexcept { return amplitudes_; }
    std::size_t size() const noexcept { return entries_.size(); }

    /// Number of eigenstates of the original measurement; reductions never
    /// shrink this even when they drop entries.
    std::size_t index_space() const noexcept { return index_space_; }

private:
    ObserverChain(std::vector<ChainEntry> entries, std::vector<Amplitude> amplitudes,
                  std::size_t index_space);

    friend ObserverChain first_reduction(const ObserverChain&, std::size_t);
    friend std::optional<ObserverChain> second_reduction(const ObserverChain&, std::size_t);

    std::vector<ChainEntry> entries_;
    std::vector<Amplitude> amplitudes_;
    std::size_t index_space_;
};

/// Projection of the first observer onto outcome k: the single entry at
/// position k survives, keeping its coefficient unnormalized.  Callers that
/// need a unit state for further sampling renormalize explicitly.
/// Throws IndexOutOfRange when k is not a valid entry position.
ObserverChain first_reduction(const ObserverChain& chain, std::size_t k);

/// Projection of the second observer onto eigenstate m: entries whose
/// second-observer index equals m survive.  On the output of
/// first_reduction(chain, k) this is non-null exactly when m == k, and then
/// returns the chain unchanged -- the confirming observer can only agree.
/// Throws IndexOutOfRange when m is outside the chain's index space.
std::optional<ObserverChain> second_reduction(const ObserverChain& chain, std::size_t m);

}  // namespace qrlab
