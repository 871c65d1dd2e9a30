#pragma once

#include <cstdint>

#include "qrlab/quantum.hpp"

namespace qrlab {

enum class BiasVariant : std::uint8_t { Original, Modified };

/// Subjective-influence model: within an affected scope, each branch's
/// probability is reweighted by exp(-strength * valence) and the scope is
/// rescaled to keep its pre-bias total.  Painful branches (higher valence)
/// lose probability to pleasanter ones; negative valences gain.
///
///  - Original: one scope covering the whole superposition, regardless of
///    branch origin.  The global norm is the conserved total.
///  - Modified: one scope per CM-internal (cm_id, group_id) group, each
///    conserving its own total; externally imposed branches are never
///    touched.  Variation happens only relative to alternatives the same
///    internal event created.
///
/// strength = +infinity is the exact limit of the finite rule: each scope's
/// total moves onto its minimum-valence branches among those that still
/// carry probability, split in proportion to their pre-bias probabilities.
struct BiasModel {
    BiasVariant variant = BiasVariant::Modified;
    double strength = 0.0;  // beta >= 0; +infinity allowed

    static BiasModel original(double beta) noexcept { return {BiasVariant::Original, beta}; }
    static BiasModel modified(double beta) noexcept { return {BiasVariant::Modified, beta}; }

    friend bool operator==(const BiasModel&, const BiasModel&) = default;
};

/// Applies the model to a normalized superposition and returns the biased
/// state.  Branch order, labels, phases, valences and origins are all
/// preserved; only moduli change.  strength = 0 returns the input verbatim.
/// Throws EmptyGroup when a CM-internal group under the Modified variant
/// has zero total probability (nothing to conserve), std::invalid_argument
/// on an unnormalized input or a negative/NaN strength.
Superposition apply_bias(const Superposition& s, const BiasModel& model);

/// Closed form of apply_bias for the canonical two-branch decision
/// (painful branch at valence 1, neutral branch at valence 0, both
/// externally imposed): returns the post-bias probability of the painful
/// branch.
///   Original: p * e^-beta / (p * e^-beta + 1 - p)
///   Modified: p unchanged (external branches are out of scope)
/// Throws std::invalid_argument unless 0 <= p_pain <= 1 and strength >= 0.
double bias_shift(double p_pain, const BiasModel& model);

}  // namespace qrlab
