#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "mpox/rng.hpp"

namespace mpox {

// Thrown by the moment formulas at alpha == beta, where the closed forms are
// singular. The validating constructor already rejects that point, but a
// channel assembled by direct field assignment can still reach it.
struct SingularMomentError : std::domain_error {
    using std::domain_error::domain_error;
};

// Exponential mark law clamped at cap: eps = min(raw, cap) with raw ~ Exp(mean).
// The clamp puts an atom at cap; samples are never rejected.
struct MarkDistribution {
    double mean = 1.0; // mean of the raw exponential, not of the clamped law
    double cap = 3.0;

    MarkDistribution() = default;
    MarkDistribution(double mean_in, double cap_in);

    double sample(Rng& rng) const; // in (0, cap]
    double truncated_mean() const; // E[min(raw, cap)] = mean (1 - exp(-cap/mean))
    double log1p_mean() const;     // E[ln(1 + eps)], quadrature plus the atom at cap

    bool operator==(const MarkDistribution&) const = default;
};

// Self-exciting channel with exponential kernel alpha e^{-beta (t - T_i)}.
// lambda0 == 0 switches the channel off entirely.
struct HawkesChannel {
    double lambda0 = 0.0;
    double alpha = 0.0;
    double beta = 1.0;
    MarkDistribution marks;

    HawkesChannel() = default;
    // throws std::invalid_argument on lambda0 < 0, alpha < 0, beta <= 0,
    // or alpha/beta >= 1 (supercritical channels are rejected outright)
    HawkesChannel(double lambda0_in, double alpha_in, double beta_in,
                  MarkDistribution marks_in = MarkDistribution{});

    double branching_ratio() const { return alpha / beta; }

    bool operator==(const HawkesChannel&) const = default;
};

struct EventLog {
    std::vector<double> times; // strictly increasing
    std::vector<double> marks; // one per event
    int channel = 1;           // 1..4

    std::size_t size() const { return times.size(); }
};

// Left-limit intensity lambda0 + alpha sum_{T_i < t} e^{-beta (t - T_i)}.
// Events at exactly t do not contribute. Negative t throws std::domain_error.
double intensity_at(const HawkesChannel& ch, const EventLog& log, double t);

// Integrated intensity lambda0 t + (alpha/beta) sum_{T_i < t} (1 - e^{-beta (t - T_i)}).
double compensator(const HawkesChannel& ch, const EventLog& log, double t);

// Ogata thinning with the left-limit intensity plus alpha as the dominating
// rate; exact for the monotone-decaying exponential kernel. Each event draws
// an independent mark. Deterministic for a given rng state.
EventLog simulate_events(const HawkesChannel& ch, double horizon, Rng& rng, int channel_index = 1);

// E[lambda*_t] and E[H_t] for the unmarked linear channel; throw
// SingularMomentError at alpha == beta.
double expected_intensity(const HawkesChannel& ch, double t);
double expected_count(const HawkesChannel& ch, double t);

// lambda0 / (1 - alpha/beta), the t -> infinity limit of expected_intensity.
double stationary_intensity(const HawkesChannel& ch);

// Streaming left-limit intensity evaluator. advance(t) folds events one at a
// time into a decayed excitation state, so a sweep over an increasing time
// sequence costs O(1) per step instead of a fresh sum per query.
class IntensityTracker {
  public:
    IntensityTracker(const HawkesChannel& ch, const EventLog& log);

    // t must be nondecreasing across calls; throws std::domain_error otherwise
    double advance(double t);

  private:
    const HawkesChannel* ch_;
    const EventLog* log_;
    std::size_t next_ = 0;     // first event not yet folded into excitation_
    double excitation_ = 0.0;  // alpha sum e^{-beta (cursor_ - T_i)} over folded events
    double cursor_ = 0.0;
};

} // namespace mpox
