#include "mpox/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mpox/rng.hpp"

namespace mpox {

namespace {

// asymptotic Kolmogorov critical values c with threshold c / sqrt(n)
constexpr double kKs01 = 1.627624;
constexpr double kKs05 = 1.358099;

double interp(double t0, double t1, double v0, double v1, double t) {
    return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
}

} // namespace

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) throw std::domain_error("mean_of: empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw std::domain_error("sample_variance: need at least two values");
    const double mu = mean_of(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - mu) * (x - mu);
    return acc / static_cast<double>(xs.size() - 1);
}

double standard_error(const std::vector<double>& xs) {
    return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

double percentile(std::vector<double> xs, double q) {
    if (xs.empty()) throw std::domain_error("percentile: empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("percentile: q must lie in [0, 1]");
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= xs.size()) return xs.back();
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] + frac * (xs[lo + 1] - xs[lo]);
}

double median_of(std::vector<double> xs) { return percentile(std::move(xs), 0.5); }

double time_average(const TimeSeries& ts, double t0) {
    if (ts.t.size() != ts.v.size()) throw std::invalid_argument("time_average: size mismatch");
    if (ts.t.size() < 2) throw std::domain_error("time_average: need at least two nodes");
    const double tail = ts.t.back();
    if (!(t0 >= ts.t.front() && t0 < tail))
        throw std::domain_error("time_average: window start outside the series span");

    auto it = std::lower_bound(ts.t.begin(), ts.t.end(), t0);
    auto k = static_cast<std::size_t>(it - ts.t.begin());
    double prev_t = t0;
    double prev_v;
    if (ts.t[k] == t0) {
        prev_v = ts.v[k];
        ++k;
    } else {
        prev_v = interp(ts.t[k - 1], ts.t[k], ts.v[k - 1], ts.v[k], t0);
    }

    double integral = 0.0;
    for (; k < ts.t.size(); ++k) {
        integral += 0.5 * (prev_v + ts.v[k]) * (ts.t[k] - prev_t);
        prev_t = ts.t[k];
        prev_v = ts.v[k];
    }
    return integral / (tail - t0);
}

SlopeFit extinction_slope(const TimeSeries& ts, double window_fraction, double floor) {
    if (ts.t.size() != ts.v.size()) throw std::invalid_argument("extinction_slope: size mismatch");
    if (ts.t.size() < 2) throw std::domain_error("extinction_slope: need at least two nodes");
    if (!(window_fraction > 0.0 && window_fraction <= 1.0))
        throw std::invalid_argument("extinction_slope: window_fraction must lie in (0, 1]");

    const double t_w = ts.t.back() - window_fraction * (ts.t.back() - ts.t.front());
    std::vector<double> tt, lv;
    bool all_at_floor = true;
    for (std::size_t k = 0; k < ts.t.size(); ++k) {
        if (ts.t[k] < t_w) continue;
        if (!(ts.v[k] > 0.0))
            throw std::domain_error("extinction_slope: values must be positive");
        tt.push_back(ts.t[k]);
        lv.push_back(std::log(ts.v[k]));
        if (ts.v[k] > floor * (1.0 + 1e-9)) all_at_floor = false;
    }
    SlopeFit fit;
    fit.n = static_cast<int>(tt.size());
    if (tt.size() < 2) throw std::domain_error("extinction_slope: window holds fewer than two nodes");
    if (all_at_floor) {
        fit.extinct_before_window = true;
        return fit;
    }

    const double tm = mean_of(tt);
    const double lm = mean_of(lv);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t k = 0; k < tt.size(); ++k) {
        sxx += (tt[k] - tm) * (tt[k] - tm);
        sxy += (tt[k] - tm) * (lv[k] - lm);
    }
    fit.slope = sxy / sxx;
    if (tt.size() > 2) {
        double sse = 0.0;
        for (std::size_t k = 0; k < tt.size(); ++k) {
            const double r = lv[k] - lm - fit.slope * (tt[k] - tm);
            sse += r * r;
        }
        fit.stderr_slope = std::sqrt(sse / static_cast<double>(tt.size() - 2) / sxx);
    }
    return fit;
}

PersistenceCheck persistence_check(const EnsembleResult& ensemble, const ModelParams& params,
                                   const StructuralBounds& bounds, MarkMeanConvention conv) {
    PersistenceCheck out;
    if (ensemble.mean.grid.empty()) throw std::domain_error("persistence_check: empty ensemble");
    const double horizon = ensemble.mean.grid.back();
    out.window_start = 0.5 * horizon;

    if (params.eta3 > 0.0) {
        const RodentPersistence rp = rodent_persistence(params, bounds);
        if (rp.bound) {
            out.rodent_applicable = true;
            out.rodent_bound = *rp.bound;
        }
    }
    const HumanPersistence hp = human_persistence(params, bounds, conv);
    if (hp.bound) {
        out.human_applicable = true;
        out.human_bound = *hp.bound;
    }

    std::vector<double> rodent_avgs, human_avgs;
    for (const PathRecord& rec : ensemble.paths) {
        if (rec.grid.empty()) continue; // failed path
        ++out.n_paths;

        TimeSeries ir, ih;
        ir.t = rec.grid;
        ih.t = rec.grid;
        bool rodent_ok = true, human_ok = true;
        for (const State& s : rec.states) {
            ir.v.push_back(s.i_r);
            ih.v.push_back(s.i_h);
            if (s.n_r() < bounds.N_r_floor) rodent_ok = false;
            const double nh = s.n_h();
            if (nh < bounds.N_h_floor || nh > bounds.M) human_ok = false;
        }
        if (rodent_ok) {
            rodent_avgs.push_back(time_average(ir, out.window_start));
        } else {
            ++out.rodent_excluded;
        }
        if (human_ok) {
            human_avgs.push_back(time_average(ih, out.window_start));
        } else {
            ++out.human_excluded;
        }
    }

    if (out.rodent_applicable && !rodent_avgs.empty()) {
        out.rodent_p5 = percentile(rodent_avgs, 0.05);
        out.rodent_pass = out.rodent_p5 >= out.rodent_bound;
    }
    if (out.human_applicable && !human_avgs.empty()) {
        out.human_p5 = percentile(human_avgs, 0.05);
        out.human_pass = out.human_p5 >= out.human_bound;
    }
    return out;
}

LlnReport hawkes_lln_check(const HawkesChannel& ch, double horizon, int n_paths,
                           std::uint64_t seed) {
    if (!(horizon > 0.0)) throw std::invalid_argument("hawkes_lln_check: horizon must be > 0");
    if (n_paths < 2) throw std::invalid_argument("hawkes_lln_check: need at least two paths");
    LlnReport rep;
    rep.theoretical = stationary_intensity(ch);
    rep.n_paths = n_paths;
    rep.horizon = horizon;

    std::vector<double> rates;
    rates.reserve(static_cast<std::size_t>(n_paths));
    for (int i = 0; i < n_paths; ++i) {
        Rng rng(stream_seed(seed, static_cast<std::uint64_t>(i), 1));
        const EventLog log = simulate_events(ch, horizon, rng);
        rates.push_back(compensator(ch, log, horizon) / horizon);
    }
    rep.empirical_mean = mean_of(rates);
    rep.stderr_mean = standard_error(rates);
    rep.deviation = std::abs(rep.empirical_mean - rep.theoretical);
    return rep;
}

double ks_statistic_exp1(std::vector<double> sample) {
    if (sample.empty()) throw std::domain_error("ks_statistic_exp1: empty sample");
    std::sort(sample.begin(), sample.end());
    const auto n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = 1.0 - std::exp(-sample[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

bool ks_test_exp1(const std::vector<double>& sample, double significance) {
    double c;
    if (significance == 0.01) {
        c = kKs01;
    } else if (significance == 0.05) {
        c = kKs05;
    } else {
        throw std::invalid_argument("ks_test_exp1: significance must be 0.01 or 0.05");
    }
    return ks_statistic_exp1(sample) < c / std::sqrt(static_cast<double>(sample.size()));
}

std::vector<double> rescaled_gaps(const HawkesChannel& ch, const EventLog& log) {
    std::vector<double> gaps;
    gaps.reserve(log.size());
    double prev = 0.0;
    for (double t : log.times) {
        const double cur = compensator(ch, log, t);
        gaps.push_back(cur - prev);
        prev = cur;
    }
    return gaps;
}

const std::vector<std::string>& scan_axis_names() {
    static const std::vector<std::string> names{
        "mu_h", "mu_r", "delta_h", "delta_r", "eta1_plus_eta2",
        "p",    "lambda0_joint",   "alpha2",  "alpha3"};
    return names;
}

ModelParams apply_axis(const ModelParams& base, const std::string& axis, double value) {
    ModelParams m = base;
    if (axis == "mu_h") {
        m.mu_h = value;
    } else if (axis == "mu_r") {
        m.mu_r = value;
    } else if (axis == "delta_h") {
        m.delta_h = value;
    } else if (axis == "delta_r") {
        m.delta_r = value;
    } else if (axis == "p") {
        m.p = value;
    } else if (axis == "eta1_plus_eta2") {
        const double s = base.eta1 + base.eta2;
        if (!(s > 0.0))
            throw std::invalid_argument("axis eta1_plus_eta2 needs a positive base eta1 + eta2");
        m.eta1 = value * (base.eta1 / s);
        m.eta2 = value * (base.eta2 / s);
    } else if (axis == "lambda0_joint") {
        m.channels[1] = HawkesChannel{value, base.channels[1].alpha, base.channels[1].beta,
                                      base.channels[1].marks};
        m.channels[2] = HawkesChannel{value, base.channels[2].alpha, base.channels[2].beta,
                                      base.channels[2].marks};
    } else if (axis == "alpha2") {
        m.channels[1] = HawkesChannel{base.channels[1].lambda0, value, base.channels[1].beta,
                                      base.channels[1].marks};
    } else if (axis == "alpha3") {
        m.channels[2] = HawkesChannel{base.channels[2].lambda0, value, base.channels[2].beta,
                                      base.channels[2].marks};
    } else {
        throw std::invalid_argument("unknown scan axis: " + axis);
    }
    m.validate();
    return m;
}

GridScan scan_r0(const ModelParams& base, const AxisSpec& x_axis, const AxisSpec& y_axis,
                 int nx, int ny, MarkMeanConvention conv) {
    if (nx < 2 || ny < 2) throw std::invalid_argument("scan_r0: need at least a 2 x 2 grid");
    if (!(x_axis.lo < x_axis.hi) || !(y_axis.lo < y_axis.hi))
        throw std::invalid_argument("scan_r0: axis bounds must satisfy lo < hi");

    GridScan out;
    out.x_name = x_axis.name;
    out.y_name = y_axis.name;
    out.x.resize(static_cast<std::size_t>(nx));
    out.y.resize(static_cast<std::size_t>(ny));
    for (int i = 0; i < nx; ++i)
        out.x[static_cast<std::size_t>(i)] =
            x_axis.lo + (x_axis.hi - x_axis.lo) * static_cast<double>(i) / (nx - 1);
    for (int j = 0; j < ny; ++j)
        out.y[static_cast<std::size_t>(j)] =
            y_axis.lo + (y_axis.hi - y_axis.lo) * static_cast<double>(j) / (ny - 1);

    out.z.assign(static_cast<std::size_t>(nx), std::vector<double>(static_cast<std::size_t>(ny)));
    for (int i = 0; i < nx; ++i) {
        const ModelParams mx = apply_axis(base, x_axis.name, out.x[static_cast<std::size_t>(i)]);
        for (int j = 0; j < ny; ++j) {
            const ModelParams mxy =
                apply_axis(mx, y_axis.name, out.y[static_cast<std::size_t>(j)]);
            out.z[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                compute_r0(mxy, conv).r0;
        }
    }

    // level-one crossings on grid edges, linear interpolation
    auto emit = [&out](double cx, double cy) { out.contour.emplace_back(cx, cy); };
    for (std::size_t i = 0; i < out.x.size(); ++i) {
        for (std::size_t j = 0; j < out.y.size(); ++j) {
            const double f0 = out.z[i][j] - 1.0;
            if (f0 == 0.0) emit(out.x[i], out.y[j]);
            if (i + 1 < out.x.size()) {
                const double f1 = out.z[i + 1][j] - 1.0;
                if (f0 * f1 < 0.0) {
                    const double s = f0 / (f0 - f1);
                    emit(out.x[i] + s * (out.x[i + 1] - out.x[i]), out.y[j]);
                }
            }
            if (j + 1 < out.y.size()) {
                const double f1 = out.z[i][j + 1] - 1.0;
                if (f0 * f1 < 0.0) {
                    const double s = f0 / (f0 - f1);
                    emit(out.x[i], out.y[j] + s * (out.y[j + 1] - out.y[j]));
                }
            }
        }
    }
    std::sort(out.contour.begin(), out.contour.end());
    out.contour.erase(std::unique(out.contour.begin(), out.contour.end()), out.contour.end());
    return out;
}

} // namespace mpox
