#include "qrlab/refcheck.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace qrlab {

namespace {

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buffer[160];
    std::snprintf(buffer, sizeof(buffer), format, a, b, c);
    return buffer;
}

/// True when `value` printed at `decimals` places equals `target` (i.e. the
/// two agree within half a unit in the last printed place).
bool rounds_to(double value, double target, int decimals) {
    return std::abs(value - target) < 0.5 * std::pow(10.0, -decimals) + 1e-15;
}

}  // namespace

ReferenceCheckResult check_reference(const ReferenceExperiment& data) {
    ReferenceCheckResult result;
    result.data = data;

    const auto push = [&](std::string name, bool pass, std::string detail) {
        result.checks.push_back({std::move(name), std::move(detail), pass});
    };

    const long long drift =
        static_cast<long long>(data.u) - static_cast<long long>(data.d);
    const long long lamp_excess =
        static_cast<long long>(data.n_l) - static_cast<long long>(data.n_s);
    push("ledger identity u - d = N_L - N_S", drift == lamp_excess,
         std::to_string(drift) + " vs " + std::to_string(lamp_excess));

    const std::uint64_t e = data.n - data.u - data.d;
    push("unchanged trials e = N - u - d = 1253", e == 1253, std::to_string(e));

    const double p0 = static_cast<double>(data.n_l) / static_cast<double>(data.n);
    push("plug-in p0 = N_L / N = 0.5044 (4 decimals)", rounds_to(p0, 0.5044, 4),
         fmt("%.15g", p0));

    const NullModel model = null_model(p0);
    push("step law (p, q, r) = (0.2500, 0.2500, 0.5000) (4 decimals)",
         rounds_to(model.p, 0.25, 4) && rounds_to(model.q, 0.25, 4) &&
             rounds_to(model.r, 0.50, 4),
         fmt("(%.8f, %.8f, %.8f)", model.p, model.q, model.r));

    const double s_ud = sigma_ud(model, data.n);
    push("sigma(u - d) = 35.4 +/- 0.05", std::abs(s_ud - 35.4) <= 0.05, fmt("%.15g", s_ud));

    const double s_u = sigma_u(model, data.n);
    push("sigma(u) = sigma(d) = 21.7 +/- 0.05", std::abs(s_u - 21.7) <= 0.05,
         fmt("%.15g", s_u));

    ExperimentTally tally;
    tally.n = data.n;
    tally.n_s = data.n_s;
    tally.n_l = data.n_l;
    tally.u = data.u;
    tally.d = data.d;
    tally.e = e;
    const StatsReport stats = z_statistic(tally, model);
    push("z = (u - d) / sigma(u - d) = 0.481 +/- 0.0005",
         std::abs(stats.z - 0.481) <= 0.0005, fmt("%.15g", stats.z));
    push("|u - d| within one sigma(u - d)", stats.within_one_sigma,
         fmt("|%.0f| <= %.15g", static_cast<double>(drift), stats.sigma_ud));
    push("u and d within sigma(u) of N * p",
         stats.u_within_sigma && stats.d_within_sigma,
         fmt("N * p = %.6f, |dev| = %.6f and %.6f", stats.expected_u,
             std::abs(static_cast<double>(data.u) - stats.expected_u),
             std::abs(static_cast<double>(data.d) - stats.expected_u)));

    result.all_pass = true;
    for (const IdentityCheck& check : result.checks) result.all_pass &= check.pass;
    return result;
}

void write_reference_report(std::ostream& os, const ReferenceCheckResult& result) {
    os << "reference data: N=" << result.data.n << " N_S=" << result.data.n_s
       << " N_L=" << result.data.n_l << " u=" << result.data.u << " d=" << result.data.d
       << '\n';
    for (const IdentityCheck& check : result.checks) {
        os << (check.pass ? "[PASS] " : "[FAIL] ") << check.name << "  -- " << check.detail
           << '\n';
    }
    os << (result.all_pass ? "all identities hold\n" : "IDENTITY FAILURES PRESENT\n");
}

}  // namespace qrlab
