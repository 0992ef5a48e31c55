#pragma once

// Test-side reference integrator: high-accuracy adaptive RK (dopri5) for the
// noise-free, jump-free drift ODE.  Used only to measure Euler convergence.

#include <array>

#include <boost/numeric/odeint.hpp>

#include "mpox/model.hpp"
#include "mpox/simulator.hpp"

namespace mpox::testing {

inline State ode_reference(const ModelParams& params, const State& init, double horizon) {
    namespace odeint = boost::numeric::odeint;
    using Vec = std::array<double, 6>;

    auto system = [&params](const Vec& x, Vec& dxdt, double /*t*/) {
        State st;
        for (int i = 0; i < 6; ++i) st[i] = x[i];
        dxdt = drift(st, params);
    };

    Vec x;
    for (int i = 0; i < 6; ++i) x[i] = init[i];
    auto stepper = odeint::make_controlled(1e-12, 1e-12,
                                           odeint::runge_kutta_dopri5<Vec>());
    odeint::integrate_adaptive(stepper, system, x, 0.0, horizon, 1e-3);

    State out;
    for (int i = 0; i < 6; ++i) out[i] = x[i];
    return out;
}

} // namespace mpox::testing
