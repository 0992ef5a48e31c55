#include "mpox/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mpox {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}

double mark_mean(const HawkesChannel& ch, MarkMeanConvention conv) {
    return conv == MarkMeanConvention::configured ? ch.marks.mean : ch.marks.truncated_mean();
}

// lambda0 g / (1 - alpha/beta); g = 1 gives the bare stationary event rate
double stationary_load(const HawkesChannel& ch, double g) {
    const double nu = ch.alpha / ch.beta;
    if (!(nu < 1.0))
        throw std::domain_error("jump channel must be subcritical (alpha/beta < 1)");
    return ch.lambda0 * g / (1.0 - nu);
}

} // namespace

void ModelParams::validate() const {
    require(theta_h >= 0.0, "model.theta_h must be >= 0");
    require(theta_r >= 0.0, "model.theta_r must be >= 0");
    require(mu_h > 0.0, "model.mu_h must be > 0");
    require(mu_r > 0.0, "model.mu_r must be > 0");
    require(delta_h >= 0.0, "model.delta_h must be >= 0");
    require(delta_r >= 0.0, "model.delta_r must be >= 0");
    require(zeta >= 0.0, "model.zeta must be >= 0");
    require(gamma_h >= 0.0, "model.gamma_h must be >= 0");
    require(theta_q >= 0.0 && theta_q <= 1.0, "model.theta_q must lie in [0, 1]");
    require(p >= 0.0 && p <= 1.0, "model.p must lie in [0, 1]");
    require(eta1 >= 0.0, "model.eta1 must be >= 0");
    require(eta2 >= 0.0, "model.eta2 must be >= 0");
    require(eta3 >= 0.0, "model.eta3 must be >= 0");
    for (int k = 0; k < 8; ++k) {
        require(sigma[static_cast<std::size_t>(k)] >= 0.0,
                "model.sigma" + std::to_string(k + 1) + " must be >= 0");
    }
    for (int i = 0; i < 4; ++i) {
        const auto& ch = channels[static_cast<std::size_t>(i)];
        const std::string tag = "channel_" + std::to_string(i + 1);
        require(ch.lambda0 >= 0.0, tag + ".lambda0 must be >= 0");
        require(ch.alpha >= 0.0, tag + ".alpha must be >= 0");
        require(ch.beta > 0.0, tag + ".beta must be > 0");
        require(ch.alpha / ch.beta < 1.0, tag + " must be subcritical (alpha/beta < 1)");
        require(ch.marks.mean > 0.0, tag + ".mean must be > 0");
        require(ch.marks.cap > 0.0, tag + ".cap must be > 0");
    }
}

ModelParams baseline_params() {
    ModelParams p;
    p.theta_h = 7.95e-5;
    p.theta_r = 5.48e-4;
    p.mu_h = 4.11e-3;
    p.mu_r = 5.48e-6;
    p.delta_h = 5.48e-4;
    p.delta_r = 1.37e-3;
    p.zeta = 5.48e-3;
    p.gamma_h = 2.27e-3;
    p.theta_q = 0.8;
    p.p = 0.30;
    p.eta1 = 6.85e-7;
    p.eta2 = 1.64e-7;
    p.eta3 = 7.40e-5;
    p.sigma = {0.3, 0.3, 0.3, 0.3, 0.3, 0.3, 0.05, 0.05};
    const MarkDistribution marks{1.0, 3.0};
    p.channels = {HawkesChannel{2e-4, 0.20, 1.0, marks}, HawkesChannel{2e-4, 0.20, 1.0, marks},
                  HawkesChannel{2e-4, 0.15, 1.0, marks}, HawkesChannel{2e-4, 0.15, 1.0, marks}};
    return p;
}

void StructuralBounds::validate() const {
    require(M > 0.0, "bounds.M must be > 0");
    require(K_star > 0.0, "bounds.K_star must be > 0");
    require(N_r_floor > 0.0, "bounds.N_r_floor must be > 0");
    require(N_h_floor > 0.0, "bounds.N_h_floor must be > 0");
    require(N_h_floor <= M, "bounds.N_h_floor must not exceed bounds.M");
}

R0Breakdown compute_r0(const ModelParams& params, MarkMeanConvention conv) {
    R0Breakdown out;
    out.contact_human = (1.0 - params.p) * (params.eta1 + params.eta2);
    out.contact_rodent = params.eta3;
    out.jump_ih = stationary_load(params.channels[1], mark_mean(params.channels[1], conv));
    out.jump_qh = stationary_load(params.channels[2], mark_mean(params.channels[2], conv));
    out.denominator =
        std::min(params.mu_h, params.mu_r) + std::min(params.delta_h, params.delta_r);
    if (!(out.denominator > 0.0))
        throw std::domain_error("r0 denominator min(mu_h, mu_r) + min(delta_h, delta_r) must be > 0");
    out.r0 = (out.contact_human + out.contact_rodent + out.jump_ih + out.jump_qh) / out.denominator;
    return out;
}

double extinction_exponent(const ModelParams& params, MarkMeanConvention conv) {
    const R0Breakdown r = compute_r0(params, conv);
    return r.denominator * (r.r0 - 1.0);
}

RodentPersistence rodent_persistence(const ModelParams& params, const StructuralBounds& bounds) {
    if (!(params.eta3 > 0.0))
        throw std::domain_error("rodent persistence requires eta3 > 0");
    RodentPersistence out;
    const double s8 = params.sigma[7];
    out.a = params.eta3 - params.mu_r - params.delta_r - 0.5 * s8 * s8;
    if (out.a > 0.0) out.bound = (bounds.N_r_floor / params.eta3) * out.a;
    return out;
}

HumanPersistence human_persistence(const ModelParams& params, const StructuralBounds& bounds,
                                   MarkMeanConvention conv) {
    if (!(params.mu_h > 0.0))
        throw std::domain_error("human persistence requires mu_h > 0");
    HumanPersistence out;
    const double q = 1.0 - params.p;

    out.eps_h =
        params.theta_h / (bounds.M * (params.mu_h + q * (params.eta2 + params.eta1 * bounds.K_star)));

    double load = 0.0; // sum G_i lambda_bar_i over the three infected-side channels
    for (int i = 1; i < 4; ++i) {
        const auto& ch = params.channels[static_cast<std::size_t>(i)];
        load += stationary_load(ch, mark_mean(ch, conv));
    }

    out.l2 = params.channels[1].marks.log1p_mean();
    const double lam_bar2 = stationary_load(params.channels[1], 1.0);

    const double e = out.eps_h;
    const double s2 = params.sigma[1];
    const double s3 = params.sigma[2];
    const double s4 = params.sigma[3];
    out.lambda_h =
        q * params.eta2 *
            ((e * e * params.mu_h + (e * e * e - 1.0) * s3 * s3) / params.mu_h - load / params.mu_h) -
        (params.mu_h + params.delta_h + params.zeta + 0.5 * (s4 * s4 + q * q * s2 * s2)) +
        out.l2 * lam_bar2;

    out.lambda0_h = q * params.eta2 * (params.eta1 + params.eta2) / (params.mu_h * bounds.N_h_floor);
    if (out.lambda_h > 0.0 && out.lambda0_h > 0.0) out.bound = out.lambda_h / out.lambda0_h;
    return out;
}

ThresholdReport threshold_report(const ModelParams& params, const StructuralBounds& bounds,
                                 MarkMeanConvention conv) {
    ThresholdReport rep;
    rep.r0 = compute_r0(params, conv);
    rep.extinction_exp = rep.r0.denominator * (rep.r0.r0 - 1.0);
    if (params.eta3 > 0.0) {
        rep.rodent = rodent_persistence(params, bounds);
    } else {
        // the bound divides by eta3; the exponent itself is still well defined
        rep.rodent.a = params.eta3 - params.mu_r - params.delta_r -
                       0.5 * params.sigma[7] * params.sigma[7];
        rep.rodent.bound = std::nullopt;
    }
    rep.human = human_persistence(params, bounds, conv);
    rep.extinction_predicted = rep.r0.r0 < 1.0;
    rep.rodent_persistent = rep.rodent.a > 0.0;
    rep.human_persistent = rep.human.lambda_h > 0.0;
    rep.indeterminate =
        !rep.extinction_predicted && !rep.rodent_persistent && !rep.human_persistent;
    return rep;
}

} // namespace mpox
