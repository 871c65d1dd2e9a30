#include "qrlab/bias.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace qrlab {

namespace {

void validate_strength(double beta) {
    if (std::isnan(beta) || beta < 0.0) {
        throw std::invalid_argument("bias strength must be >= 0");
    }
}

/// Reweights probs[i] for i in scope, conserving the scope's pre-bias total.
/// Throws EmptyGroup when that total is zero.
void reweight_scope(std::vector<double>& probs, const std::vector<double>& valences,
                    const std::vector<std::size_t>& scope, double beta) {
    double total = 0.0;
    for (std::size_t i : scope) total += probs[i];
    if (total <= 0.0) {
        throw EmptyGroup("bias scope carries zero total probability");
    }
    if (beta == 0.0) return;

    // Reference valence: the minimum over branches that still carry
    // probability.  Shifting the exponent by it changes nothing within the
    // scope (common factor) but keeps the weights in [0, 1] so that huge
    // strengths cannot underflow the whole scope to zero.
    double v_ref = std::numeric_limits<double>::infinity();
    for (std::size_t i : scope) {
        if (probs[i] > 0.0) v_ref = std::min(v_ref, valences[i]);
    }

    if (std::isinf(beta)) {
        // Exact limit of the finite rule: the minimum-valence branches with
        // mass absorb the whole scope total, pro rata to their prior mass.
        double surviving = 0.0;
        for (std::size_t i : scope) {
            if (probs[i] > 0.0 && valences[i] == v_ref) surviving += probs[i];
        }
        const double scale = total / surviving;
        for (std::size_t i : scope) {
            probs[i] = (probs[i] > 0.0 && valences[i] == v_ref) ? probs[i] * scale : 0.0;
        }
        return;
    }

    double weighted_total = 0.0;
    std::vector<double> weighted(scope.size());
    for (std::size_t j = 0; j < scope.size(); ++j) {
        const std::size_t i = scope[j];
        weighted[j] = probs[i] > 0.0 ? probs[i] * std::exp(-beta * (valences[i] - v_ref)) : 0.0;
        weighted_total += weighted[j];
    }
    const double scale = total / weighted_total;  // exactly 1 when valences agree
    for (std::size_t j = 0; j < scope.size(); ++j) probs[scope[j]] = weighted[j] * scale;
}

}  // namespace

Superposition apply_bias(const Superposition& s, const BiasModel& model) {
    validate_strength(model.strength);
    if (!s.is_normalized(1e-9)) {
        throw std::invalid_argument("apply_bias needs a normalized superposition");
    }
    if (model.strength == 0.0) return s;

    const std::vector<Branch>& branches = s.branches();
    std::vector<double> probs(branches.size());
    std::vector<double> valences(branches.size());
    for (std::size_t i = 0; i < branches.size(); ++i) {
        probs[i] = branches[i].probability();
        valences[i] = branches[i].valence;
    }

    std::vector<std::vector<std::size_t>> scopes;
    if (model.variant == BiasVariant::Original) {
        scopes.emplace_back(branches.size());
        for (std::size_t i = 0; i < branches.size(); ++i) scopes[0][i] = i;
    } else {
        // One scope per (cm_id, group_id); external branches stay out of
        // every scope and are therefore returned untouched.
        std::vector<Origin> keys;
        for (std::size_t i = 0; i < branches.size(); ++i) {
            if (branches[i].origin.kind != OriginKind::CMInternal) continue;
            const Origin& key = branches[i].origin;
            std::size_t slot = keys.size();
            for (std::size_t k = 0; k < keys.size(); ++k) {
                if (keys[k] == key) {
                    slot = k;
                    break;
                }
            }
            if (slot == keys.size()) {
                keys.push_back(key);
                scopes.emplace_back();
            }
            scopes[slot].push_back(i);
        }
    }

    for (const std::vector<std::size_t>& scope : scopes) {
        reweight_scope(probs, valences, scope, model.strength);
    }

    std::vector<Branch> biased = branches;
    for (std::size_t i = 0; i < biased.size(); ++i) {
        biased[i].amplitude.modulus = std::sqrt(probs[i]);
    }
    return Superposition(std::move(biased));
}

double bias_shift(double p_pain, const BiasModel& model) {
    validate_strength(model.strength);
    if (std::isnan(p_pain) || p_pain < 0.0 || p_pain > 1.0) {
        throw std::invalid_argument("p_pain must lie in [0, 1]");
    }
    if (model.variant == BiasVariant::Modified) return p_pain;
    if (model.strength == 0.0 || p_pain == 0.0 || p_pain == 1.0) return p_pain;
    if (std::isinf(model.strength)) return 0.0;  // all mass to the neutral branch
    const double suppressed = p_pain * std::exp(-model.strength);
    return suppressed / (suppressed + (1.0 - p_pain));
}

}  // namespace qrlab
