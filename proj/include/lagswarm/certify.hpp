#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lagswarm/controller.hpp"
#include "lagswarm/simulation.hpp"

namespace lagswarm {

/// Bound constants for a whole scenario: worst case over its agents on
/// sampling boxes covering the initial conditions and the leader range,
/// plus the leader-rate and initial-error constants.
BoundConstants scenario_bounds(const ScenarioConfig& config, uint64_t seed);

struct TopologyCertificate {
    int index = 0;
    GammaCertificate gamma;
    GainSet gains;  // the gains judged on this topology
    GainLedger ledger;
    std::vector<InequalityCheck> checks;
    bool ok = false;
};

struct ScenarioCertificate {
    BoundConstants bounds;
    std::vector<TopologyCertificate> topologies;
    DwellResult dwell;
    double configured_dwell = 0.0;
    bool dwell_ok = false;
    bool all_ok = false;  // every inequality on every topology
};

/// Designs gains per sensing topology and judges either the designed gains
/// (use_designed_gains) or the scenario's configured gains against the full
/// inequality chain, then evaluates the switching dwell floor.
ScenarioCertificate certify_scenario(const ScenarioConfig& config, bool use_designed_gains,
                                     uint64_t seed);

void write_scenario_certificate(std::ostream& out, const ScenarioCertificate& cert);
std::string certificate_to_json(const ScenarioCertificate& cert);

}  // namespace lagswarm
