#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qrlab/trinomial.hpp"

namespace qrlab {

/// Headline counts of the physical two-channel selector run this laboratory
/// replicates: 2500 two-part trials, recorded shocks and left lamps, and
/// the up/down step counts.  e is implied by N - u - d.
struct ReferenceExperiment {
    std::uint64_t n = 2500;
    std::uint64_t n_s = 1244;
    std::uint64_t n_l = 1261;
    std::uint64_t u = 632;
    std::uint64_t d = 615;
};

struct IdentityCheck {
    std::string name;
    std::string detail;  // computed values, full precision
    bool pass = false;
};

struct ReferenceCheckResult {
    ReferenceExperiment data;
    std::vector<IdentityCheck> checks;
    bool all_pass = false;
};

/// Recomputes every derived quantity of the reference dataset from its raw
/// counts and verifies the published bottom line:
///   - ledger identities u - d = N_L - N_S and e = N - u - d
///   - plug-in p0 = N_L / N = 0.5044 and the step law (p, q, r) =
///     (0.2500, 0.2500, 0.5000) at four decimals
///   - sigma(u-d) = 35.4 +/- 0.05 and sigma(u) = 21.7 +/- 0.05
///   - z = 0.481 +/- 0.0005 with |u - d| inside one sigma
///   - u and d each within sigma(u) of the null expectation N * p
ReferenceCheckResult check_reference(const ReferenceExperiment& data = {});

/// One line per identity: [PASS]/[FAIL], name, computed detail.
void write_reference_report(std::ostream& os, const ReferenceCheckResult& result);

}  // namespace qrlab
