#pragma once

#include <array>
#include <optional>

#include "mpox/hawkes.hpp"

namespace mpox {

// Epidemiological rates (per day) plus the four excitation channels.
// Channel roles: 1 multiplies S_h, 2 I_h, 3 Q_h, 4 R_h.
struct ModelParams {
    double theta_h = 0.0; // human recruitment
    double theta_r = 0.0; // rodent recruitment
    double mu_h = 0.0;    // human natural mortality
    double mu_r = 0.0;    // rodent natural mortality
    double delta_h = 0.0; // human disease mortality
    double delta_r = 0.0; // rodent disease mortality
    double zeta = 0.0;    // quarantine rate
    double gamma_h = 0.0; // recovery rate of quarantined
    double theta_q = 0.0; // quarantine effectiveness in [0, 1]
    double p = 0.0;       // vaccination coverage in [0, 1]
    double eta1 = 0.0;    // rodent-to-human contact
    double eta2 = 0.0;    // human-to-human contact
    double eta3 = 0.0;    // rodent-to-rodent contact
    std::array<double, 8> sigma{}; // volatilities, sigma[k] drives B_{k+1}
    std::array<HawkesChannel, 4> channels{};

    // throws std::invalid_argument naming the field and the violated constraint
    void validate() const;

    bool operator==(const ModelParams&) const = default;
};

// Baseline parameter set used throughout as the default configuration.
ModelParams baseline_params();

// Structural envelopes the persistence bounds assume; not derivable from the
// rates, so they are explicit inputs with documented defaults.
struct StructuralBounds {
    double M = 1e5;        // upper envelope for N_h
    double K_star = 0.002; // envelope for I_r / N_r inside the human force of infection
    double N_r_floor = 1e3;
    double N_h_floor = 1e4;

    void validate() const;

    bool operator==(const StructuralBounds&) const = default;
};

// G_i enters the threshold formulas as the mark-law mean. `configured` reads
// the raw exponential mean; `truncated` accounts for the clamp at cap.
enum class MarkMeanConvention { configured, truncated };

struct R0Breakdown {
    double contact_human = 0.0;  // (1 - p)(eta1 + eta2)
    double contact_rodent = 0.0; // eta3
    double jump_ih = 0.0;        // lambda0_2 G_2 / (1 - alpha_2/beta_2)
    double jump_qh = 0.0;        // lambda0_3 G_3 / (1 - alpha_3/beta_3)
    double denominator = 0.0;    // min(mu_h, mu_r) + min(delta_h, delta_r)
    double r0 = 0.0;
};

// throws std::domain_error on zero denominator or supercritical channel 2/3
R0Breakdown compute_r0(const ModelParams& params,
                       MarkMeanConvention conv = MarkMeanConvention::configured);

// (min(mu_h, mu_r) + min(delta_h, delta_r)) (R0 - 1); negative predicts decay
double extinction_exponent(const ModelParams& params,
                           MarkMeanConvention conv = MarkMeanConvention::configured);

struct RodentPersistence {
    double a = 0.0;              // eta3 - mu_r - delta_r - sigma8^2 / 2
    std::optional<double> bound; // (N_r_floor / eta3) a, present only when a > 0
};

// throws std::domain_error when eta3 <= 0 (the bound divides by eta3)
RodentPersistence rodent_persistence(const ModelParams& params, const StructuralBounds& bounds);

struct HumanPersistence {
    double eps_h = 0.0;
    double lambda_h = 0.0;
    double lambda0_h = 0.0;
    double l2 = 0.0;             // E[ln(1 + eps_2)] under the channel-2 mark law
    std::optional<double> bound; // lambda_h / lambda0_h, present when both are positive
};

// throws std::domain_error on supercritical channels 2..4 or mu_h <= 0
HumanPersistence human_persistence(const ModelParams& params, const StructuralBounds& bounds,
                                   MarkMeanConvention conv = MarkMeanConvention::configured);

struct ThresholdReport {
    R0Breakdown r0;
    double extinction_exp = 0.0;
    RodentPersistence rodent;
    HumanPersistence human;
    bool extinction_predicted = false; // r0 < 1
    bool rodent_persistent = false;    // a > 0
    bool human_persistent = false;     // lambda_h > 0
    bool indeterminate = false;        // none of the above hold
};

ThresholdReport threshold_report(const ModelParams& params, const StructuralBounds& bounds,
                                 MarkMeanConvention conv = MarkMeanConvention::configured);

} // namespace mpox
