// scenarios.hpp
// Named bound-verification experiments. Each scenario runs a code/noise
// pair through the transpose-channel machinery and the see-saw recovery
// estimate, and emits one BoundReport per checked inequality. Estimated
// quantities are only ever substituted in directions that keep the checks
// valid: the see-saw value is an upper bound on the optimal fidelity loss,
// and eta * f(eta; d) is monotone, so enlarging eta only loosens the
// right-hand sides; the contraction factor delta is estimated from below,
// so the per-sample checks fold each sample's own contraction ratio into
// the value they use.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "aqec/fidelity.hpp"

namespace aqec {

using Json = nlohmann::ordered_json;

struct BoundReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;  // rhs - lhs
    double tol = 0.0;
    bool satisfied = false;  // slack >= -tol
    bool informational = false;  // excluded from exit-code aggregation
    std::string inputs_digest;
    Json meta;
};

BoundReport make_report(std::string name, double lhs, double rhs, double tol,
                        std::string digest, Json meta = Json::object());

struct ScenarioConfig {
    std::uint64_t seed = 12345;
    int restarts = 32;
    ExecMode mode = ExecMode::parallel;

    // Named tolerances (CLI --tol.<name>).
    double tol_order = 1e-9;    // definitional orderings, exact identities
    double tol_fbound = 1e-7;   // eta_P <= eta f(eta; d_A) style bounds
    double tol_slack = 1e-6;    // estimated-quantity bound chains
    double tol_choi = 1e-9;     // channel equality via Choi distance
    double tol_spread = 1e-8;   // fidelity spread over B states
    double tol_perfect = 1e-8;  // perfect-correctability residuals

    OptimizerOptions opt(std::uint64_t stream) const;
    SeesawOptions seesaw(std::uint64_t stream) const;
};

std::string inputs_digest(const SubsystemCode& code, const KrausChannel& noise,
                          const ScenarioConfig& cfg, const std::string& scenario);

// Trivial gauge subsystem (d_b = 1): both directions of the transpose
// near-optimality bound, plus the per-state inequality on sampled states.
std::vector<BoundReport> scenario_subspace(const SubsystemCode& code, const KrausChannel& noise,
                                           const ScenarioConfig& cfg);

// Product noise F_A (x) F_B over factor codes: the transpose channel of the
// product is the product of the factor transposes, and correctability of A
// reduces to the subspace scenario on the A factor alone.
std::vector<BoundReport> scenario_product_channel(const SubsystemCode& code,
                                                  const ProductFactors& factors,
                                                  const ScenarioConfig& cfg);

// Gauge subsystem held in the maximally mixed state (the C_0 family).
std::vector<BoundReport> scenario_maxmixed_b(const SubsystemCode& code, const KrausChannel& noise,
                                             const ScenarioConfig& cfg);

// Gauge subsystem prepared in a known fixed state phi_B.
std::vector<BoundReport> scenario_state_dependent(const SubsystemCode& code,
                                                  const KrausChannel& noise, const Mat& phi_b,
                                                  const ScenarioConfig& cfg);

// B perfectly correctable: the recovered-A fidelity is independent of the
// initial B state and has a closed quadratic form.
std::vector<BoundReport> scenario_b_correctable(const SubsystemCode& code,
                                                const KrausChannel& noise,
                                                const ScenarioConfig& cfg);

struct DeltaEstimate {
    double delta = 0.0;  // largest contraction ratio found; lower bound
    Mat witness_rho_a, witness_rho_b;
    int samples = 0;
};

// Largest found ratio ||E(rho_A (x) rho_B) - E(rho_A (x) I/d_B)||_tr over
// ||rho_B - I/d_B||_tr; multi-start ascent over pure pairs plus random
// mixed samples.
DeltaEstimate estimate_delta(const SubsystemCode& code, const KrausChannel& noise,
                             const ScenarioConfig& cfg, int restarts = 64, int samples = 1000);

// Noise that destroys distinguishability on B: the non-asymptotic chain
// bound checked per sampled state, plus the first-order form as an
// informational report.
std::vector<BoundReport> scenario_b_scrambling(const SubsystemCode& code,
                                               const KrausChannel& noise,
                                               const ScenarioConfig& cfg);

// Perfect-correctability residuals in both equivalent forms, plus the
// transpose-channel fidelity loss.
std::vector<BoundReport> scenario_perfect_check(const SubsystemCode& code,
                                                const KrausChannel& noise,
                                                const ScenarioConfig& cfg);

struct SkippedScenario {
    std::string name;
    std::string reason;
};

struct RunAllResult {
    std::vector<BoundReport> reports;
    std::vector<SkippedScenario> skipped;
};

// Dispatches every applicable scenario for the pair; inapplicable ones are
// listed with the reason. factors may be null when the noise has no
// explicit product structure.
RunAllResult run_all(const SubsystemCode& code, const KrausChannel& noise,
                     const ProductFactors* factors, const ScenarioConfig& cfg);

Json report_to_json(const BoundReport& r);
std::string reports_to_csv(const std::vector<BoundReport>& reports);

}  // namespace aqec
