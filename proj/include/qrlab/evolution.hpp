#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qrlab/bias.hpp"
#include "qrlab/quantum.hpp"
#include "qrlab/rng.hpp"

namespace qrlab {

/// Whether a genotype's valence wiring matches reality: a Correct genotype
/// finds continued contact with the noxious stimulus painful (withdrawal
/// feels neutral), a Wrong genotype has it backwards.
enum class Association : std::uint8_t { Correct, Wrong };

struct Genotype {
    Association association = Association::Correct;
    double autonomic_escape_bonus = 0.0;  // additive shift of P(withdraw), in [0, 0.5]
};

/// Which escape machinery the lineage runs on.
enum class LineageMode : std::uint8_t { ConsciousOnly, AutonomicOnly, Tandem };

struct LineageConfig {
    LineageMode mode = LineageMode::Tandem;
    BiasModel bias = BiasModel::modified(0.0);  // acts on the CM-internal decision state
    std::uint32_t population = 0;               // organisms per lineage, >= 1
    double hazard_per_encounter = 1.0;          // P(death | continued contact), in [0, 1]
    std::uint32_t generations = 0;              // encounters per organism, >= 1

    void validate(const Genotype& genotype) const;  // throws std::invalid_argument
};

enum class EncounterOutcome : std::uint8_t { SurvivedWithdrew, SurvivedContinued, Died };

/// One noxious encounter.  The organism's central mechanism creates an
/// equal-weight two-branch decision state (withdraw W / continue C) tagged
/// CM-internal, with valences set by the genotype's association.  Conscious
/// modes pass it through the bias model; autonomic modes then add the
/// reflex bonus to P(W) (clamped to [0, 1]).  The state reduces to a single
/// act; continued contact is lethal with the configured hazard.
/// Consumes exactly two uniform draws (act, hazard) per call.
EncounterOutcome encounter(const Genotype& genotype, const LineageConfig& config,
                           RandomStream& rng);

/// Alive fraction per generation (index 0 = initial 1.0) for each mode run
/// under identical conditions.
struct SurvivalCurves {
    std::vector<double> conscious;
    std::vector<double> autonomic;
    std::vector<double> tandem;
};

/// Runs the configured lineage once per mode -- the config's own mode field
/// is overridden -- with common random numbers: encounter (generation g,
/// organism o) draws from the substream keyed by (master_seed, g, o) in
/// every mode, so the three curves are aligned, maximally comparable, and
/// reproducible at any execution order.  No reproduction is modelled:
/// curves are non-increasing.
SurvivalCurves run_lineages(const Genotype& genotype, const LineageConfig& config,
                            std::uint64_t master_seed);

/// CSV: header "generation,mode,fraction_alive", modes spelled
/// conscious/autonomic/tandem, rows ordered by generation then mode.
void write_survival_csv(std::ostream& os, const SurvivalCurves& curves);

}  // namespace qrlab
