#include "qrlab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

namespace qrlab {

void LineageConfig::validate(const Genotype& genotype) const {
    if (population < 1) throw std::invalid_argument("population must be >= 1");
    if (generations < 1) throw std::invalid_argument("generations must be >= 1");
    if (!(hazard_per_encounter >= 0.0) || !(hazard_per_encounter <= 1.0)) {
        throw std::invalid_argument("hazard must lie in [0, 1]");
    }
    if (std::isnan(bias.strength) || bias.strength < 0.0) {
        throw std::invalid_argument("bias strength must be >= 0");
    }
    if (!(genotype.autonomic_escape_bonus >= 0.0) || !(genotype.autonomic_escape_bonus <= 0.5)) {
        throw std::invalid_argument("autonomic escape bonus must lie in [0, 0.5]");
    }
}

namespace {

constexpr double kHalfModulus = 0.70710678118654752;  // sqrt(1/2)

/// P(withdraw) for one encounter before any sampling: the biased CM-internal
/// decision state, plus the reflex bonus where the mode includes it.
double withdraw_probability(const Genotype& genotype, const LineageConfig& config) {
    const double withdraw_valence = genotype.association == Association::Correct ? 0.0 : 1.0;
    const double continue_valence = 1.0 - withdraw_valence;
    double p_withdraw = 0.5;
    if (config.mode == LineageMode::ConsciousOnly || config.mode == LineageMode::Tandem) {
        const Superposition decision({
            {"W", {kHalfModulus, 0.0}, withdraw_valence, Origin::cm_internal(0, 0)},
            {"C", {kHalfModulus, 0.0}, continue_valence, Origin::cm_internal(0, 0)},
        });
        p_withdraw = apply_bias(decision, config.bias).branches()[0].probability();
    }
    if (config.mode == LineageMode::AutonomicOnly || config.mode == LineageMode::Tandem) {
        p_withdraw = std::clamp(p_withdraw + genotype.autonomic_escape_bonus, 0.0, 1.0);
    }
    return p_withdraw;
}

}  // namespace

EncounterOutcome encounter(const Genotype& genotype, const LineageConfig& config,
                           RandomStream& rng) {
    config.validate(genotype);
    const double p_withdraw = withdraw_probability(genotype, config);
    const Superposition act({
        {"W", {std::sqrt(p_withdraw), 0.0}, 0.0, Origin::cm_internal(0, 0)},
        {"C", {std::sqrt(1.0 - p_withdraw), 0.0}, 0.0, Origin::cm_internal(0, 0)},
    });
    const bool withdrew = reduce(act, rng).label == "W";
    // Draw the hazard unconditionally so every encounter consumes the same
    // number of uniforms; cross-mode stream alignment depends on it.
    const bool lethal_roll = rng.next_unit() < config.hazard_per_encounter;
    if (withdrew) return EncounterOutcome::SurvivedWithdrew;
    return lethal_roll ? EncounterOutcome::Died : EncounterOutcome::SurvivedContinued;
}

SurvivalCurves run_lineages(const Genotype& genotype, const LineageConfig& config,
                            std::uint64_t master_seed) {
    config.validate(genotype);
    SurvivalCurves curves;

    const auto run_mode = [&](LineageMode mode) {
        LineageConfig mode_config = config;
        mode_config.mode = mode;
        // Fast path: the act probability is fixed per (genotype, config), so
        // precompute it instead of rebuilding superpositions per encounter.
        // The comparison below reproduces the inverse-CDF walk of reduce()
        // on the two-branch act state bit for bit (including the sqrt /
        // square round trip of the moduli), so this loop and encounter()
        // make identical decisions from identical streams.
        const double p_withdraw = withdraw_probability(genotype, mode_config);
        const double w_mass = std::sqrt(p_withdraw) * std::sqrt(p_withdraw);
        const double c_mass = std::sqrt(1.0 - p_withdraw) * std::sqrt(1.0 - p_withdraw);
        const double total_mass = w_mass + c_mass;

        std::vector<double> curve;
        curve.reserve(config.generations + 1);
        curve.push_back(1.0);
        std::vector<bool> alive(config.population, true);
        std::uint32_t alive_count = config.population;
        for (std::uint32_t gen = 1; gen <= config.generations && alive_count > 0; ++gen) {
            for (std::uint32_t org = 0; org < config.population; ++org) {
                if (!alive[org]) continue;
                RandomStream stream = RandomStream::substream(master_seed, {gen, org});
                const bool withdrew = stream.next_unit() * total_mass < w_mass;
                const bool lethal_roll = stream.next_unit() < config.hazard_per_encounter;
                if (!withdrew && lethal_roll) {
                    alive[org] = false;
                    --alive_count;
                }
            }
            curve.push_back(static_cast<double>(alive_count) /
                            static_cast<double>(config.population));
        }
        // Extinction short-circuit: the remaining generations stay at zero.
        while (curve.size() < config.generations + 1u) curve.push_back(0.0);
        return curve;
    };

    curves.conscious = run_mode(LineageMode::ConsciousOnly);
    curves.autonomic = run_mode(LineageMode::AutonomicOnly);
    curves.tandem = run_mode(LineageMode::Tandem);
    return curves;
}

void write_survival_csv(std::ostream& os, const SurvivalCurves& curves) {
    os << "generation,mode,fraction_alive\n";
    char buffer[32];
    const auto emit = [&](std::size_t gen, const char* mode, double fraction) {
        std::snprintf(buffer, sizeof(buffer), "%.9g", fraction);
        os << gen << ',' << mode << ',' << buffer << '\n';
    };
    for (std::size_t gen = 0; gen < curves.conscious.size(); ++gen) {
        emit(gen, "conscious", curves.conscious[gen]);
        emit(gen, "autonomic", curves.autonomic[gen]);
        emit(gen, "tandem", curves.tandem[gen]);
    }
}

}  // namespace qrlab
