#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>

#include "qrlab/errors.hpp"
#include "qrlab/selector.hpp"

namespace qrlab {

/// Null model of the per-trial step u - d when the two parts of a trial are
/// independent and both driven by the same left-channel probability p0:
///   +1 (left lamp, no shock)  with p = p0 * q0
///   -1 (shock, no left lamp)  with q = q0 * p0
///    0 (agree)                with r = p0^2 + q0^2
/// p and q coincide by construction, so the step is symmetric around 0.
struct NullModel {
    double p0 = 0.0;
    double q0 = 0.0;
    double p = 0.0;
    double q = 0.0;
    double r = 0.0;
};

/// Builds the null model.  Throws DegenerateP0 unless 0 < p0 < 1 (at the
/// endpoints every trial agrees and the step variance collapses to zero).
NullModel null_model(double p0);

/// Standard deviation of u - d over n trials:
/// sqrt((4pq + r(p+q)) * n).  n = 0 gives 0.
double sigma_ud(const NullModel& model, std::uint64_t n);

/// Standard deviation of u (and equally d) over n trials:
/// sqrt(p(q+r) * n).  n = 0 gives 0.
double sigma_u(const NullModel& model, std::uint64_t n);

/// Null-model assessment of one experiment tally.
struct StatsReport {
    std::uint64_t n = 0;
    std::uint64_t u = 0;
    std::uint64_t d = 0;
    std::uint64_t e = 0;
    double sigma_ud = 0.0;
    double sigma_u = 0.0;
    double z = 0.0;               // (u - d) / sigma_ud
    double threshold = 1.0;       // decision threshold in units of sigma
    bool within_one_sigma = true; // |u - d| <= threshold * sigma_ud
    double expected_u = 0.0;      // n * p, the null mean of u and of d
    bool u_within_sigma = true;   // |u - n*p| <= sigma_u
    bool d_within_sigma = true;   // |d - n*p| <= sigma_u
};

/// Computes the z statistic of u - d against the null model, plus the
/// per-count checks of u and d against their null mean.  The threshold is
/// in sigma units (1 = the replication-fidelity default).  Requires
/// u + d + e == n; throws ZeroSigma when n == 0.
StatsReport z_statistic(const ExperimentTally& tally, const NullModel& model,
                        double threshold_sigmas = 1.0);

inline constexpr unsigned kExactDistributionMaxN = 12;

/// Exact probability distribution of u - d over n trials, by iterative
/// convolution of the per-trial step law (O(n^2) work, exact up to
/// floating-point rounding).  Keys are the support points -n..n that carry
/// mass.  Throws EnumerationTooLarge for n > kExactDistributionMaxN; the
/// quadratic cost stays trivial there but every supported case is already
/// checkable against brute-force enumeration.
std::map<int, double> exact_ud_distribution(const NullModel& model, unsigned n);

/// Smallest trial count n >= 1 whose expected drift detects a per-trial
/// shock-probability shift delta at k standard deviations of the null:
/// n * delta >= k * sqrt(n / 2), i.e. ceil(k^2 / (2 delta^2)) clamped to 1.
/// The sqrt(n/2) is sigma_ud at the symmetric operating point p0 = 1/2.
/// Requires 0 < delta <= 0.5 and k >= 0 finite.
std::uint64_t required_trials(double delta, double k);

/// Structured-text block mirroring the reference presentation: every
/// quantity at its customary rounding next to full precision.
void write_stats_report(std::ostream& os, const ExperimentTally& tally, const NullModel& model,
                        const StatsReport& stats);

}  // namespace qrlab
