#include "mpox/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>

#include "mpox/rng.hpp"

namespace mpox {

const char* const kCompartmentNames[6] = {"S_h", "I_h", "Q_h", "R_h", "S_r", "I_r"};

double State::operator[](int i) const {
    switch (i) {
        case 0: return s_h;
        case 1: return i_h;
        case 2: return q_h;
        case 3: return r_h;
        case 4: return s_r;
        case 5: return i_r;
    }
    throw std::out_of_range("State index must be in 0..5");
}

double& State::operator[](int i) {
    switch (i) {
        case 0: return s_h;
        case 1: return i_h;
        case 2: return q_h;
        case 3: return r_h;
        case 4: return s_r;
        case 5: return i_r;
    }
    throw std::out_of_range("State index must be in 0..5");
}

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("sim.dt must be > 0");
    if (!(horizon > 0.0)) throw std::invalid_argument("sim.horizon must be > 0");
    if (!(dt <= horizon)) throw std::invalid_argument("sim.dt must be <= sim.horizon");
    if (n_paths < 1) throw std::invalid_argument("sim.n_paths must be >= 1");
    if (!(positivity_floor >= 0.0))
        throw std::invalid_argument("sim.positivity_floor must be >= 0");
    for (int i = 0; i < 6; ++i) {
        if (!std::isfinite(initial_state[i]) || initial_state[i] < 0.0)
            throw std::invalid_argument(std::string("initial_state.") + kCompartmentNames[i] +
                                        " must be finite and >= 0");
    }
}

PathFailure::PathFailure(int path, double time_in, int comp, const std::string& what)
    : std::runtime_error(what), path_index(path), time(time_in), component(comp) {}

std::array<double, 6> drift(const State& x, const ModelParams& m) {
    for (int i = 0; i < 6; ++i) {
        if (!(x[i] >= 0.0) || !std::isfinite(x[i]))
            throw std::domain_error(std::string("drift: ") + kCompartmentNames[i] +
                                    " must be finite and >= 0");
    }
    // incidence ratios: a zero numerator counts as zero even when the
    // corresponding population is empty, so boundary states stay evaluable
    const double fi_num = (1.0 - m.p) * (m.eta1 * x.i_r + m.eta2 * x.i_h) * x.s_h;
    const double force_h = fi_num == 0.0 ? 0.0 : fi_num / x.n_h();
    const double ri_num = m.eta3 * x.s_r * x.i_r;
    const double force_r = ri_num == 0.0 ? 0.0 : ri_num / x.n_r();

    std::array<double, 6> f{};
    f[0] = m.theta_h - force_h - m.mu_h * x.s_h;
    f[1] = force_h - (m.mu_h + m.delta_h + m.zeta) * x.i_h;
    f[2] = m.zeta * x.i_h - (m.mu_h + m.gamma_h + (1.0 - m.theta_q) * m.delta_h) * x.q_h;
    f[3] = m.gamma_h * x.q_h - m.mu_h * x.r_h;
    f[4] = m.theta_r - force_r - m.mu_r * x.s_r;
    f[5] = force_r - (m.mu_r + m.delta_r) * x.i_r;
    return f;
}

std::array<double, 6> diffusion(const State& x, const ModelParams& m,
                                const std::array<double, 8>& dw) {
    for (int i = 0; i < 6; ++i) {
        if (!(x[i] >= 0.0) || !std::isfinite(x[i]))
            throw std::domain_error(std::string("diffusion: ") + kCompartmentNames[i] +
                                    " must be finite and >= 0");
    }
    const double q = 1.0 - m.p;
    const double num1 = q * m.sigma[0] * x.i_r * x.s_h;
    const double mix1 = num1 == 0.0 ? 0.0 : num1 / x.n_h();
    const double num2 = q * m.sigma[1] * x.i_h * x.s_h;
    // same magnitude leaves S_h and enters I_h, driven by the same draw dw[1]
    const double mix2 = num2 == 0.0 ? 0.0 : num2 / x.n_h();

    std::array<double, 6> g{};
    g[0] = -(mix1 * dw[0] + mix2 * dw[1]) + m.sigma[2] * x.s_h * dw[2];
    g[1] = mix2 * dw[1] + m.sigma[3] * x.i_h * dw[3];
    g[2] = m.sigma[4] * x.q_h * dw[4];
    g[3] = m.sigma[5] * x.r_h * dw[5];
    g[4] = m.sigma[6] * x.s_r * dw[6];
    g[5] = m.sigma[7] * x.i_r * dw[7];
    return g;
}

void apply_jumps(State& x, int channel, const std::vector<double>& marks) {
    double* target = nullptr;
    switch (channel) {
        case 1: target = &x.s_h; break;
        case 2: target = &x.i_h; break;
        case 3: target = &x.q_h; break;
        case 4: target = &x.r_h; break;
        default: throw std::domain_error("apply_jumps: channel must be in 1..4");
    }
    double factor = 1.0;
    for (double eps : marks) factor *= 1.0 + eps;
    *target *= factor;
}

std::vector<double> regular_grid(double dt, double horizon) {
    if (!(dt > 0.0) || !(horizon > 0.0))
        throw std::invalid_argument("regular_grid: dt and horizon must be > 0");
    std::vector<double> g{0.0};
    for (long k = 1;; ++k) {
        const double t = static_cast<double>(k) * dt;
        if (t >= horizon * (1.0 - 1e-12)) break;
        g.push_back(t);
    }
    g.push_back(horizon);
    return g;
}

PathRecord simulate_path(const ModelParams& params, const SimConfig& cfg, int path_index) {
    params.validate();
    cfg.validate();
    if (path_index < 0) throw std::invalid_argument("path_index must be >= 0");
    const auto pidx = static_cast<std::uint64_t>(path_index);

    PathRecord rec;
    rec.path_index = path_index;
    for (int c = 0; c < 4; ++c) {
        Rng rng(stream_seed(cfg.master_seed, pidx, static_cast<std::uint64_t>(c + 1)));
        rec.events[static_cast<std::size_t>(c)] =
            simulate_events(params.channels[static_cast<std::size_t>(c)], cfg.horizon, rng, c + 1);
    }

    const std::vector<double> regular = regular_grid(cfg.dt, cfg.horizon);
    std::vector<double> evt;
    for (const auto& log : rec.events) evt.insert(evt.end(), log.times.begin(), log.times.end());
    std::sort(evt.begin(), evt.end());
    rec.grid.reserve(regular.size() + evt.size());
    std::merge(regular.begin(), regular.end(), evt.begin(), evt.end(),
               std::back_inserter(rec.grid));
    rec.grid.erase(std::unique(rec.grid.begin(), rec.grid.end()), rec.grid.end());

    Rng noise(stream_seed(cfg.master_seed, pidx, 5));
    rec.states.resize(rec.grid.size());
    State st = cfg.initial_state;
    rec.states[0] = st;
    std::array<std::size_t, 4> cursor{}; // next unapplied event per channel

    for (std::size_t k = 1; k < rec.grid.size(); ++k) {
        const double t1 = rec.grid[k];
        const double h = t1 - rec.grid[k - 1];
        const double sq = std::sqrt(h);

        const std::array<double, 6> f = drift(st, params);
        std::array<double, 8> dw;
        for (auto& w : dw) w = sq * noise.normal();
        const std::array<double, 6> g = diffusion(st, params, dw);

        for (int i = 0; i < 6; ++i) {
            double v = st[i] + f[i] * h + g[i];
            // rescue negative Euler overshoots only; small positive values pass through
            if (v < 0.0) {
                v = cfg.positivity_floor;
                ++rec.clamp_count;
            }
            st[i] = v;
        }

        for (int c = 0; c < 4; ++c) {
            const auto& log = rec.events[static_cast<std::size_t>(c)];
            std::size_t& cur = cursor[static_cast<std::size_t>(c)];
            if (cur < log.times.size() && log.times[cur] == t1) {
                std::vector<double> marks;
                while (cur < log.times.size() && log.times[cur] == t1) {
                    marks.push_back(log.marks[cur]);
                    ++cur;
                }
                apply_jumps(st, c + 1, marks);
            }
        }

        for (int i = 0; i < 6; ++i) {
            if (!std::isfinite(st[i]))
                throw PathFailure(path_index, t1, i,
                                  "path " + std::to_string(path_index) + ": non-finite " +
                                      kCompartmentNames[i] + " at t = " + std::to_string(t1));
        }
        rec.states[k] = st;
    }
    return rec;
}

EnsembleResult simulate_ensemble(const ModelParams& params, const SimConfig& cfg, int n_threads) {
    params.validate();
    cfg.validate();

    EnsembleResult out;
    out.paths.resize(static_cast<std::size_t>(cfg.n_paths));
    std::vector<std::unique_ptr<PathFailureInfo>> failed(static_cast<std::size_t>(cfg.n_paths));

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    const int workers =
        std::min(n_threads > 0 ? n_threads : static_cast<int>(hw), cfg.n_paths);

    std::atomic<int> next{0};
    auto work = [&]() {
        while (true) {
            const int idx = next.fetch_add(1);
            if (idx >= cfg.n_paths) return;
            const auto u = static_cast<std::size_t>(idx);
            try {
                out.paths[u] = simulate_path(params, cfg, idx);
            } catch (const PathFailure& pf) {
                failed[u] = std::make_unique<PathFailureInfo>(
                    PathFailureInfo{pf.path_index, pf.time, pf.component, pf.what()});
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& th : pool) th.join();
    }

    for (std::size_t i = 0; i < out.paths.size(); ++i) {
        if (failed[i]) out.failures.push_back(*failed[i]);
        out.total_clamps += out.paths[i].clamp_count;
    }

    // reduction in path-index order: identical result for any thread count
    out.mean.grid = regular_grid(cfg.dt, cfg.horizon);
    out.mean.mean.assign(out.mean.grid.size(), State{});
    int n_ok = 0;
    for (const auto& rec : out.paths) {
        if (rec.grid.empty()) continue; // failed path, reported above
        ++n_ok;
        std::size_t j = 0;
        for (std::size_t k = 0; k < out.mean.grid.size(); ++k) {
            while (j < rec.grid.size() && rec.grid[j] != out.mean.grid[k]) ++j;
            if (j == rec.grid.size())
                throw std::logic_error("ensemble mean: regular grid point missing from path grid");
            for (int i = 0; i < 6; ++i) out.mean.mean[k][i] += rec.states[j][i];
        }
    }
    if (n_ok > 0) {
        for (auto& s : out.mean.mean)
            for (int i = 0; i < 6; ++i) s[i] /= static_cast<double>(n_ok);
    }
    return out;
}

} // namespace mpox
