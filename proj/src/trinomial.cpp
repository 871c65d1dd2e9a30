#include "qrlab/trinomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace qrlab {

NullModel null_model(double p0) {
    if (!(p0 > 0.0) || !(p0 < 1.0)) {  // also rejects NaN
        throw DegenerateP0("p0 must lie strictly between 0 and 1");
    }
    NullModel m;
    m.p0 = p0;
    m.q0 = 1.0 - p0;
    m.p = m.p0 * m.q0;
    m.q = m.q0 * m.p0;
    m.r = m.p0 * m.p0 + m.q0 * m.q0;
    return m;
}

double sigma_ud(const NullModel& model, std::uint64_t n) {
    const double per_trial = 4.0 * model.p * model.q + model.r * (model.p + model.q);
    return std::sqrt(per_trial * static_cast<double>(n));
}

double sigma_u(const NullModel& model, std::uint64_t n) {
    return std::sqrt(model.p * (model.q + model.r) * static_cast<double>(n));
}

StatsReport z_statistic(const ExperimentTally& tally, const NullModel& model,
                        double threshold_sigmas) {
    if (tally.n == 0) {
        throw ZeroSigma("z statistic undefined for an empty tally");
    }
    if (tally.u + tally.d + tally.e != tally.n) {
        throw std::invalid_argument("tally is inconsistent: u + d + e != n");
    }
    if (!(threshold_sigmas > 0.0) || !std::isfinite(threshold_sigmas)) {
        throw std::invalid_argument("decision threshold must be finite and > 0");
    }

    StatsReport report;
    report.n = tally.n;
    report.u = tally.u;
    report.d = tally.d;
    report.e = tally.e;
    report.threshold = threshold_sigmas;
    report.sigma_ud = sigma_ud(model, tally.n);
    report.sigma_u = sigma_u(model, tally.n);
    const double drift = static_cast<double>(tally.u) - static_cast<double>(tally.d);
    report.z = drift / report.sigma_ud;
    report.within_one_sigma = std::abs(drift) <= threshold_sigmas * report.sigma_ud;
    report.expected_u = static_cast<double>(tally.n) * model.p;
    report.u_within_sigma =
        std::abs(static_cast<double>(tally.u) - report.expected_u) <= report.sigma_u;
    report.d_within_sigma =
        std::abs(static_cast<double>(tally.d) - report.expected_u) <= report.sigma_u;
    return report;
}

std::map<int, double> exact_ud_distribution(const NullModel& model, unsigned n) {
    if (n > kExactDistributionMaxN) {
        throw EnumerationTooLarge("exact distribution supported up to n = " +
                                  std::to_string(kExactDistributionMaxN));
    }
    // dist[k] = P(u - d = k - n) after the trials folded in so far.
    std::vector<double> dist(2 * n + 1, 0.0);
    dist[n] = 1.0;
    std::vector<double> next(dist.size(), 0.0);
    for (unsigned trial = 0; trial < n; ++trial) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t k = 0; k < dist.size(); ++k) {
            const double mass = dist[k];
            if (mass == 0.0) continue;
            next[k + 1] += mass * model.p;
            next[k - 1] += mass * model.q;
            next[k] += mass * model.r;
        }
        dist.swap(next);
    }
    std::map<int, double> out;
    for (std::size_t k = 0; k < dist.size(); ++k) {
        if (dist[k] > 0.0) out[static_cast<int>(k) - static_cast<int>(n)] = dist[k];
    }
    return out;
}

std::uint64_t required_trials(double delta, double k) {
    if (!(delta > 0.0) || delta > 0.5 || !std::isfinite(delta)) {
        throw std::invalid_argument("shift must lie in (0, 0.5]");
    }
    if (!(k >= 0.0) || !std::isfinite(k)) {
        throw std::invalid_argument("detection level k must be finite and >= 0");
    }
    // Squared form of n * delta >= k * sqrt(n / 2), with a hair of relative
    // tolerance: at exact-boundary inputs (k = sqrt(2), delta = 0.5 hits the
    // threshold with equality) representation noise in k must not push the
    // count past the closed-form answer.
    const auto detects = [&](std::uint64_t n) {
        return static_cast<double>(n) * (delta * delta) >= 0.5 * (k * k) * (1.0 - 1e-12);
    };
    std::uint64_t n =
        static_cast<std::uint64_t>(std::ceil(k * k / (2.0 * delta * delta) - 1e-9));
    if (n < 1) n = 1;
    while (!detects(n)) ++n;                       // guard against rounding down
    while (n > 1 && detects(n - 1)) --n;           // and against rounding up
    return n;
}

namespace {

std::string fixed(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
    return buffer;
}

std::string full(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.15g", value);
    return buffer;
}

const char* yes_no(bool v) { return v ? "yes" : "no"; }

}  // namespace

void write_stats_report(std::ostream& os, const ExperimentTally& tally, const NullModel& model,
                        const StatsReport& stats) {
    write_tally(os, tally);
    os << "null model\n"
       << "  p0         : " << fixed(model.p0, 4) << "  (" << full(model.p0) << ")\n"
       << "  q0         : " << fixed(model.q0, 4) << "  (" << full(model.q0) << ")\n"
       << "  p          : " << fixed(model.p, 4) << "  (" << full(model.p) << ")\n"
       << "  q          : " << fixed(model.q, 4) << "  (" << full(model.q) << ")\n"
       << "  r          : " << fixed(model.r, 4) << "  (" << full(model.r) << ")\n"
       << "spread\n"
       << "  sigma(u-d) : " << fixed(stats.sigma_ud, 1) << "  (" << full(stats.sigma_ud) << ")\n"
       << "  sigma(u)   : " << fixed(stats.sigma_u, 1) << "  (" << full(stats.sigma_u) << ")\n"
       << "  expected u : " << fixed(stats.expected_u, 1) << "  (" << full(stats.expected_u)
       << ")\n"
       << "decision\n"
       << "  z          : " << fixed(stats.z, 3) << "  (" << full(stats.z) << ")\n"
       << "  |u-d| within " << full(stats.threshold)
       << " sigma(u-d) : " << yes_no(stats.within_one_sigma) << '\n'
       << "  u within sigma(u) of expectation : " << yes_no(stats.u_within_sigma) << '\n'
       << "  d within sigma(u) of expectation : " << yes_no(stats.d_within_sigma) << '\n';
}

}  // namespace qrlab
