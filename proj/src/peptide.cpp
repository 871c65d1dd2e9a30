#include "qrlab/peptide.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace qrlab {

double min_velocity_uncertainty(const Particle& particle, UncertaintyConvention convention) {
    if (!(particle.mass_u > 0.0) || !std::isfinite(particle.mass_u)) {
        throw NonPositiveInput("particle mass must be finite and > 0");
    }
    if (!(particle.delta_x_m > 0.0) || !std::isfinite(particle.delta_x_m)) {
        throw NonPositiveInput("position uncertainty must be finite and > 0");
    }
    const double mass_kg = particle.mass_u * kAtomicMassUnitKg;
    const double dv = kReducedPlanck / (mass_kg * particle.delta_x_m);
    return convention == UncertaintyConvention::Half ? 0.5 * dv : dv;
}

double position_spread(double dv_mps, double t_s) { return dv_mps * t_s; }

PeptideReport make_peptide_report(const Particle& particle, double drift_time_s,
                                  double claimed_spread_m) {
    if (!(drift_time_s >= 0.0) || !std::isfinite(drift_time_s)) {
        throw NonPositiveInput("drift time must be finite and >= 0");
    }
    PeptideReport report;
    report.particle = particle;
    report.mass_kg = particle.mass_u * kAtomicMassUnitKg;
    report.dv_plain_mps = min_velocity_uncertainty(particle, UncertaintyConvention::Plain);
    report.dv_half_mps = min_velocity_uncertainty(particle, UncertaintyConvention::Half);
    report.drift_time_s = drift_time_s;
    report.spread_m = position_spread(report.dv_plain_mps, drift_time_s);
    report.claimed_spread_m = claimed_spread_m;
    if (claimed_spread_m > 0.0 && report.spread_m > 0.0) {
        report.claim_ratio = claimed_spread_m / report.spread_m;
        report.claim_flagged = std::abs(report.claim_ratio - 1.0) > 0.01;
    }
    return report;
}

namespace {

std::string sci(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.6g", value);
    return buffer;
}

}  // namespace

void write_peptide_report(std::ostream& os, const PeptideReport& r) {
    os << "particle\n"
       << "  mass              : " << sci(r.particle.mass_u) << " u = " << sci(r.mass_kg)
       << " kg\n"
       << "  position spread   : " << sci(r.particle.delta_x_m) << " m\n"
       << "minimum velocity uncertainty\n"
       << "  dx*dp >= hbar     : " << sci(r.dv_plain_mps) << " m/s = "
       << sci(r.dv_plain_mps * 1e3) << " mm/s\n"
       << "  dx*dp >= hbar/2   : " << sci(r.dv_half_mps) << " m/s = " << sci(r.dv_half_mps * 1e3)
       << " mm/s\n"
       << "ballistic drift (plain convention)\n"
       << "  time              : " << sci(r.drift_time_s) << " s\n"
       << "  position spread   : " << sci(r.spread_m) << " m = " << sci(r.spread_m * 1e6)
       << " um\n";
    if (r.claimed_spread_m > 0.0) {
        os << "claim audit\n"
           << "  claimed spread    : " << sci(r.claimed_spread_m) << " m\n";
        if (r.claim_flagged) {
            const double needed_time =
                r.dv_plain_mps > 0.0 ? r.claimed_spread_m / r.dv_plain_mps : 0.0;
            os << "  DISCREPANCY       : claim is " << sci(r.claim_ratio)
               << "x the computed spread; at the computed velocity it would need "
               << sci(needed_time) << " s of drift (or a mm-vs-um unit slip)\n";
        } else {
            os << "  agreement         : claim matches computed spread within 1%\n";
        }
    }
}

}  // namespace qrlab
