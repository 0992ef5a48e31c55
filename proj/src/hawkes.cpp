#include "mpox/hawkes.hpp"

#include <cmath>
#include <stdexcept>

namespace mpox {

namespace {

// adaptive Simpson with the standard Richardson acceptance; tol is absolute
template <class F>
double simpson_rec(const F& f, double a, double b, double fa, double fm, double fb,
                   double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double rel_tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double scale = std::abs(whole) > 1e-300 ? std::abs(whole) : 1.0;
    return simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol * scale, 48);
}

} // namespace

MarkDistribution::MarkDistribution(double mean_in, double cap_in) : mean(mean_in), cap(cap_in) {
    if (!(mean > 0.0)) throw std::invalid_argument("MarkDistribution: mean must be > 0");
    if (!(cap > 0.0)) throw std::invalid_argument("MarkDistribution: cap must be > 0");
}

double MarkDistribution::sample(Rng& rng) const {
    double x;
    do {
        x = rng.exponential(mean);
    } while (x <= 0.0);
    return x < cap ? x : cap;
}

double MarkDistribution::truncated_mean() const {
    return mean * (1.0 - std::exp(-cap / mean));
}

double MarkDistribution::log1p_mean() const {
    const double m = mean;
    const auto density_part = [m](double x) { return std::log1p(x) * std::exp(-x / m) / m; };
    const double body = adaptive_simpson(density_part, 0.0, cap, 1e-10);
    return body + std::log1p(cap) * std::exp(-cap / mean);
}

HawkesChannel::HawkesChannel(double lambda0_in, double alpha_in, double beta_in,
                             MarkDistribution marks_in)
    : lambda0(lambda0_in), alpha(alpha_in), beta(beta_in), marks(marks_in) {
    if (!(lambda0 >= 0.0)) throw std::invalid_argument("HawkesChannel: lambda0 must be >= 0");
    if (!(alpha >= 0.0)) throw std::invalid_argument("HawkesChannel: alpha must be >= 0");
    if (!(beta > 0.0)) throw std::invalid_argument("HawkesChannel: beta must be > 0");
    if (!(alpha / beta < 1.0))
        throw std::invalid_argument("HawkesChannel: subcriticality requires alpha/beta < 1");
}

IntensityTracker::IntensityTracker(const HawkesChannel& ch, const EventLog& log)
    : ch_(&ch), log_(&log) {}

double IntensityTracker::advance(double t) {
    if (t < 0.0) throw std::domain_error("IntensityTracker: t must be >= 0");
    if (t < cursor_) throw std::domain_error("IntensityTracker: time must not decrease");
    const auto& times = log_->times;
    while (next_ < times.size() && times[next_] < t) {
        const double ti = times[next_];
        excitation_ = excitation_ * std::exp(-ch_->beta * (ti - cursor_)) + ch_->alpha;
        cursor_ = ti;
        ++next_;
    }
    excitation_ *= std::exp(-ch_->beta * (t - cursor_));
    cursor_ = t;
    return ch_->lambda0 + excitation_;
}

double intensity_at(const HawkesChannel& ch, const EventLog& log, double t) {
    if (t < 0.0) throw std::domain_error("intensity_at: t must be >= 0");
    IntensityTracker tracker(ch, log);
    return tracker.advance(t);
}

double compensator(const HawkesChannel& ch, const EventLog& log, double t) {
    if (t < 0.0) throw std::domain_error("compensator: t must be >= 0");
    const double ratio = ch.alpha / ch.beta;
    double acc = ch.lambda0 * t;
    for (double ti : log.times) {
        if (ti >= t) break; // times are increasing
        acc += ratio * (1.0 - std::exp(-ch.beta * (t - ti)));
    }
    return acc;
}

EventLog simulate_events(const HawkesChannel& ch, double horizon, Rng& rng, int channel_index) {
    if (!(horizon >= 0.0)) throw std::domain_error("simulate_events: horizon must be >= 0");
    EventLog log;
    log.channel = channel_index;
    double t = 0.0;
    double excitation = 0.0; // alpha sum e^{-beta (t - T_i)} over accepted events
    while (true) {
        // the intensity decays between events, so its current value bounds it
        // on (t, next event]; after an acceptance the bound grows by alpha
        const double bound = ch.lambda0 + excitation;
        if (bound <= 0.0) break;
        const double cand = t + rng.exponential(1.0 / bound);
        if (!(cand <= horizon)) break;
        excitation *= std::exp(-ch.beta * (cand - t));
        t = cand;
        if (rng.uniform01() * bound <= ch.lambda0 + excitation) {
            log.times.push_back(t);
            log.marks.push_back(ch.marks.sample(rng));
            excitation += ch.alpha;
        }
    }
    return log;
}

double expected_intensity(const HawkesChannel& ch, double t) {
    if (t < 0.0) throw std::domain_error("expected_intensity: t must be >= 0");
    if (ch.alpha == ch.beta)
        throw SingularMomentError("expected_intensity: closed form singular at alpha == beta");
    const double d = ch.beta - ch.alpha;
    return ch.lambda0 * (ch.beta - ch.alpha * std::exp(-d * t)) / d;
}

double expected_count(const HawkesChannel& ch, double t) {
    if (t < 0.0) throw std::domain_error("expected_count: t must be >= 0");
    if (ch.alpha == ch.beta)
        throw SingularMomentError("expected_count: closed form singular at alpha == beta");
    const double d = ch.beta - ch.alpha;
    return ch.lambda0 * ch.beta * t / d +
           ch.alpha * ch.lambda0 / (d * d) * (std::exp(-d * t) - 1.0);
}

double stationary_intensity(const HawkesChannel& ch) {
    if (ch.alpha == ch.beta)
        throw SingularMomentError("stationary_intensity: undefined at alpha == beta");
    return ch.lambda0 / (1.0 - ch.alpha / ch.beta);
}

} // namespace mpox
