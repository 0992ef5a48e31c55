#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mpox/simulator.hpp"

namespace mpox {

struct TimeSeries {
    std::vector<double> t; // strictly increasing
    std::vector<double> v;
};

// basic sample statistics
double mean_of(const std::vector<double>& xs);
double sample_variance(const std::vector<double>& xs);
double standard_error(const std::vector<double>& xs);
double percentile(std::vector<double> xs, double q); // q in [0, 1], linear interpolation
double median_of(std::vector<double> xs);

// Trapezoidal time average (1 / (T - t0)) int_{t0}^T v dt; t0 inside the grid
// span (interpolated if between nodes). Empty window throws std::domain_error.
double time_average(const TimeSeries& ts, double t0);

struct SlopeFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    int n = 0;
    bool extinct_before_window = false; // every window value already at the floor
};

// Least-squares slope of log(v) over the trailing window_fraction of the span.
// Values must be positive; floor-clamped values are allowed.
SlopeFit extinction_slope(const TimeSeries& ts, double window_fraction = 0.5,
                          double floor = 1e-9);

struct PersistenceCheck {
    int n_paths = 0;
    double window_start = 0.0;

    bool rodent_applicable = false; // a > 0
    double rodent_bound = 0.0;
    double rodent_p5 = 0.0;
    bool rodent_pass = false;
    int rodent_excluded = 0; // paths whose N_r dipped below N_r_floor

    bool human_applicable = false; // lambda_h > 0
    double human_bound = 0.0;
    double human_p5 = 0.0;
    bool human_pass = false;
    int human_excluded = 0; // paths whose N_h left [N_h_floor, M]
};

// Per-path trailing-window averages of I_r and I_h from horizon/2 onward,
// 5th percentile against the theoretical bounds where they apply.
PersistenceCheck persistence_check(const EnsembleResult& ensemble, const ModelParams& params,
                                   const StructuralBounds& bounds,
                                   MarkMeanConvention conv = MarkMeanConvention::configured);

struct LlnReport {
    double theoretical = 0.0; // lambda0 / (1 - alpha/beta)
    double empirical_mean = 0.0;
    double stderr_mean = 0.0;
    double deviation = 0.0; // |empirical_mean - theoretical|
    int n_paths = 0;
    double horizon = 0.0;
};

// Monte Carlo check of lim Lambda(t)/t; one simulated log per path.
LlnReport hawkes_lln_check(const HawkesChannel& ch, double horizon, int n_paths,
                           std::uint64_t seed);

// Kolmogorov-Smirnov distance of the sample against the unit exponential CDF.
double ks_statistic_exp1(std::vector<double> sample);

// Asymptotic KS test at the given significance (critical value c(sig)/sqrt(n)).
bool ks_test_exp1(const std::vector<double>& sample, double significance = 0.01);

// Compensator increments between consecutive events, pooled across logs; under
// a correctly specified channel they are i.i.d. unit exponential.
std::vector<double> rescaled_gaps(const HawkesChannel& ch, const EventLog& log);

struct AxisSpec {
    std::string name; // one of: mu_h, mu_r, delta_h, delta_r, eta1_plus_eta2,
                      // p, lambda0_joint, alpha2, alpha3
    double lo = 0.0;
    double hi = 0.0;
};

struct GridScan {
    std::string x_name;
    std::string y_name;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<std::vector<double>> z;              // z[i][j] = r0(x[i], y[j])
    std::vector<std::pair<double, double>> contour;  // level z == 1, edge interpolation
};

// The axis names apply_axis accepts, in documentation order.
const std::vector<std::string>& scan_axis_names();

// Applies an axis value to a copy of the base parameters. eta1_plus_eta2
// preserves the base eta1:eta2 ratio; lambda0_joint sets channels 2 and 3.
ModelParams apply_axis(const ModelParams& base, const std::string& axis, double value);

// R0 over the grid plus the R0 = 1 contour by linear interpolation along
// sign-changing grid edges.
GridScan scan_r0(const ModelParams& base, const AxisSpec& x_axis, const AxisSpec& y_axis,
                 int nx, int ny, MarkMeanConvention conv = MarkMeanConvention::configured);

} // namespace mpox
