#include "qrlab/selector.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>
#include <utility>

namespace qrlab {

void ApparatusConfig::validate() const {
    if (!(rate_l > 0.0) || !std::isfinite(rate_l) || !(rate_r > 0.0) || !std::isfinite(rate_r)) {
        throw std::invalid_argument("channel rates must be finite and > 0");
    }
    if (std::isnan(bias.strength) || bias.strength < 0.0) {
        throw std::invalid_argument("bias strength must be >= 0");
    }
}

void ExperimentTally::add(const TrialRecord& record) noexcept {
    ++n;
    if (record.part1_shock) ++n_s;
    if (record.part2_left) ++n_l;
    if (record.delta > 0) {
        ++u;
    } else if (record.delta < 0) {
        ++d;
    } else {
        ++e;
    }
}

void ExperimentTally::merge(const ExperimentTally& other) noexcept {
    n += other.n;
    n_s += other.n_s;
    n_l += other.n_l;
    u += other.u;
    d += other.d;
    e += other.e;
}

Channel race_select(const ApparatusConfig& config, RandomStream& rng) {
    config.validate();
    for (;;) {
        const double t_l = rng.next_exponential(config.rate_l);
        const double t_r = rng.next_exponential(config.rate_r);
        if (t_l < t_r) return Channel::L;
        if (t_r < t_l) return Channel::R;
        // Exact tie: measure-zero in theory, representable in floating
        // point; redraw rather than pick a side.
    }
}

Superposition trial_superposition(const ApparatusConfig& config, bool armed_part) {
    config.validate();
    const double p_left = config.left_probability();
    const Origin origin = config.origin_mode == OriginKind::CMInternal
                              ? Origin::cm_internal(0, 0)
                              : Origin::external();
    return Superposition({
        {"L", {std::sqrt(p_left), 0.0}, armed_part ? 1.0 : 0.0, origin},
        {"R", {std::sqrt(1.0 - p_left), 0.0}, 0.0, origin},
    });
}

namespace {

/// Part identifiers inside a trial's substream path.
constexpr std::uint64_t kArmedPart = 0;
constexpr std::uint64_t kPerceptionPart = 1;

bool left_won(const ApparatusConfig& config, bool armed_part, RandomStream& rng) {
    const Superposition state = trial_superposition(config, armed_part);
    return reduce(apply_bias(state, config.bias), rng).label == "L";
}

}  // namespace

TrialRecord run_trial(const ApparatusConfig& config, std::uint64_t master_seed,
                      std::uint64_t trial_index) {
    RandomStream part1 = RandomStream::substream(master_seed, {trial_index, kArmedPart});
    RandomStream part2 = RandomStream::substream(master_seed, {trial_index, kPerceptionPart});

    TrialRecord record;
    record.index = trial_index + 1;
    record.part1_shock = left_won(config, true, part1);
    // The perception part carries equal valences, so the bias model is
    // provably inert on it; it goes through the same pipeline anyway.
    record.part2_left = left_won(config, false, part2);
    record.delta = (record.part2_left ? 1 : 0) - (record.part1_shock ? 1 : 0);
    return record;
}

ExperimentResult run_experiment(const ApparatusConfig& config, std::uint64_t trials,
                                std::uint64_t master_seed, unsigned threads) {
    config.validate();
    ExperimentResult result;
    result.records.resize(trials);

    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(std::max(threads, 1u), std::max<std::uint64_t>(trials, 1)));
    if (workers <= 1) {
        for (std::uint64_t i = 0; i < trials; ++i) {
            result.records[i] = run_trial(config, master_seed, i);
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        const std::uint64_t chunk = (trials + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t begin = static_cast<std::uint64_t>(w) * chunk;
            const std::uint64_t end = std::min(trials, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end] {
                for (std::uint64_t i = begin; i < end; ++i) {
                    result.records[i] = run_trial(config, master_seed, i);
                }
            });
        }
        for (std::thread& t : pool) t.join();
    }

    for (const TrialRecord& record : result.records) result.tally.add(record);
    return result;
}

void write_trial_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
    os << "index,part1_shock,part2_left,delta\n";
    for (const TrialRecord& r : records) {
        os << r.index << ',' << (r.part1_shock ? 1 : 0) << ',' << (r.part2_left ? 1 : 0) << ','
           << r.delta << '\n';
    }
}

void write_tally(std::ostream& os, const ExperimentTally& tally) {
    os << "trials              N   : " << tally.n << '\n'
       << "part-1 shocks       N_S : " << tally.n_s << '\n'
       << "part-2 left lamps   N_L : " << tally.n_l << '\n'
       << "steps up            u   : " << tally.u << '\n'
       << "steps down          d   : " << tally.d << '\n'
       << "steps unchanged     e   : " << tally.e << '\n'
       << "ledger              u + d + e = " << tally.u + tally.d + tally.e << " (N = " << tally.n
       << "), u - d = " << static_cast<long long>(tally.u) - static_cast<long long>(tally.d)
       << " (N_L - N_S = "
       << static_cast<long long>(tally.n_l) - static_cast<long long>(tally.n_s) << ")\n";
}

}  // namespace qrlab
