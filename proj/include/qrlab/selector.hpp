#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "qrlab/bias.hpp"
#include "qrlab/quantum.hpp"
#include "qrlab/rng.hpp"

namespace qrlab {

enum class Channel : std::uint8_t { L, R };

/// Two-channel selector bench: two independent background-radiation
/// counters racing for the first count.  The left channel drives the shock
/// relay in part 1 and the left lamp in part 2 of every trial.
struct ApparatusConfig {
    double rate_l = 1.0;  // mean counts per unit time, > 0
    double rate_r = 1.0;
    BiasModel bias;
    OriginKind origin_mode = OriginKind::External;  // tag on the trial superposition

    /// First-count probability of the left channel for two homogeneous
    /// Poisson processes: rate_l / (rate_l + rate_r).
    double left_probability() const noexcept { return rate_l / (rate_l + rate_r); }

    void validate() const;  // throws std::invalid_argument
};

/// Outcome of one two-part trial.
struct TrialRecord {
    std::uint64_t index = 0;  // 1-based trial number
    bool part1_shock = false; // left channel won the armed (shock) part
    bool part2_left = false;  // left lamp lit in the perception-only part
    int delta = 0;            // (part2_left ? 1 : 0) - (part1_shock ? 1 : 0)
};

/// Running ledger of an experiment.  Maintains u + d + e == n and
/// u - d == n_l - n_s by construction.
struct ExperimentTally {
    std::uint64_t n = 0;    // trials
    std::uint64_t n_s = 0;  // part-1 shocks
    std::uint64_t n_l = 0;  // part-2 left lamps
    std::uint64_t u = 0;    // trials with delta = +1
    std::uint64_t d = 0;    // trials with delta = -1
    std::uint64_t e = 0;    // trials with delta =  0

    void add(const TrialRecord& record) noexcept;
    void merge(const ExperimentTally& other) noexcept;
};

/// Samples which channel counts first, by racing two exponential waiting
/// times.  Exact floating-point ties are redrawn.  This is the physical
/// ground truth the trial superposition encodes: its winner distribution
/// equals left_probability() exactly.
Channel race_select(const ApparatusConfig& config, RandomStream& rng);

/// The two-branch trial state: branch "L" (left channel first) and "R",
/// with moduli carrying the race probabilities and origin tags from the
/// config.  The armed part gives the shock branch valence 1; the
/// perception-only part is valence-neutral, so no bias model can move it.
Superposition trial_superposition(const ApparatusConfig& config, bool armed_part);

/// Runs one trial: the armed part builds the valence-(1,0) state, applies
/// the bias model, reduces; the perception part repeats at valence (0,0).
/// Each part consumes its own substream derived from (master_seed,
/// trial_index, part), which is what makes whole experiments reproducible
/// under any execution order.
TrialRecord run_trial(const ApparatusConfig& config, std::uint64_t master_seed,
                      std::uint64_t trial_index);

struct ExperimentResult {
    ExperimentTally tally;
    std::vector<TrialRecord> records;
};

/// Runs `trials` trials, optionally across worker threads.  Results are
/// bit-identical for a given (config, master_seed) at any thread count:
/// every trial is keyed by its index alone, and the tally is folded from
/// the finished record list in index order.
ExperimentResult run_experiment(const ApparatusConfig& config, std::uint64_t trials,
                                std::uint64_t master_seed, unsigned threads = 1);

/// Trial log as CSV: header "index,part1_shock,part2_left,delta", booleans
/// as 0/1, one row per trial in index order.
void write_trial_csv(std::ostream& os, const std::vector<TrialRecord>& records);

/// Human-readable tally block (counts and the two ledger identities).
void write_tally(std::ostream& os, const ExperimentTally& tally);

}  // namespace qrlab
