#pragma once

#include <iosfwd>

#include "qrlab/errors.hpp"

namespace qrlab {

/// Reduced Planck constant, J s.
inline constexpr double kReducedPlanck = 1.05457e-34;

/// One unified atomic mass unit, kg.
inline constexpr double kAtomicMassUnitKg = 1.66054e-27;

/// A localized free particle described by its mass and how tightly its
/// position is pinned down.
struct Particle {
    double mass_u = 0.0;     // mass in atomic mass units, > 0
    double delta_x_m = 0.0;  // position uncertainty in metres, > 0
};

/// Which reading of the position-momentum inequality to use.  The Plain
/// convention (dx * dp >= hbar) reproduces the reference calculation; the
/// Half convention (dx * dp >= hbar/2) is the textbook-exact bound and
/// gives exactly half the velocity.
enum class UncertaintyConvention { Plain, Half };

/// Minimum velocity uncertainty dv = hbar / (m * dx), or half that under
/// UncertaintyConvention::Half.  Throws NonPositiveInput when mass or dx is
/// not strictly positive and finite.
double min_velocity_uncertainty(const Particle& particle,
                                UncertaintyConvention convention = UncertaintyConvention::Plain);

/// Ballistic position spread after drifting for time t at velocity
/// uncertainty dv: simply dv * t.
double position_spread(double dv_mps, double t_s);

/// Full worked calculation plus an audit against an externally claimed
/// spread value (pass claimed_spread_m <= 0 to skip the audit).
struct PeptideReport {
    Particle particle;
    double mass_kg = 0.0;
    double dv_plain_mps = 0.0;  // dx * dp >= hbar
    double dv_half_mps = 0.0;   // dx * dp >= hbar / 2
    double drift_time_s = 0.0;
    double spread_m = 0.0;         // under the Plain convention
    double claimed_spread_m = 0.0; // <= 0 when no claim was supplied
    double claim_ratio = 0.0;      // claimed / computed
    bool claim_flagged = false;    // claim off by more than 1 percent
};

PeptideReport make_peptide_report(const Particle& particle, double drift_time_s,
                                  double claimed_spread_m);

/// Structured-text rendering; when the audit flags a mismatch it prints the
/// discrepancy factor and the drift time the claim would actually need.
void write_peptide_report(std::ostream& os, const PeptideReport& report);

}  // namespace qrlab
