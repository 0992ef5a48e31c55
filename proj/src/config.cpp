#include "mpox/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>

#include "mpox/csv.hpp"

namespace mpox {

namespace {

[[noreturn]] void fail(const std::string& msg, int line) {
    throw ConfigError(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg, line);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// canonical schema order; serialization and the defaulted report both follow it
const std::vector<std::pair<std::string, std::vector<std::string>>>& schema() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> table{
        {"model",
         {"theta_h", "theta_r", "mu_h", "mu_r", "delta_h", "delta_r", "zeta", "gamma_h",
          "theta_q", "p", "eta1", "eta2", "eta3", "sigma1", "sigma2", "sigma3", "sigma4",
          "sigma5", "sigma6", "sigma7", "sigma8"}},
        {"bounds", {"M", "K_star", "N_r_floor", "N_h_floor"}},
        {"channel_1", {"lambda0", "alpha", "beta", "mean", "cap"}},
        {"channel_2", {"lambda0", "alpha", "beta", "mean", "cap"}},
        {"channel_3", {"lambda0", "alpha", "beta", "mean", "cap"}},
        {"channel_4", {"lambda0", "alpha", "beta", "mean", "cap"}},
        {"simulation", {"dt", "horizon", "n_paths", "master_seed", "positivity_floor"}},
        {"initial_state", {"s_h", "i_h", "q_h", "r_h", "s_r", "i_r"}},
        {"output", {"dir"}},
        {"scan", {"x_name", "x_lo", "x_hi", "y_name", "y_lo", "y_hi", "resolution"}},
    };
    return table;
}

double* double_slot(RunConfig& c, const std::string& n) {
    ModelParams& m = c.model;
    static const std::map<std::string, std::size_t> sigma_index{
        {"model.sigma1", 0}, {"model.sigma2", 1}, {"model.sigma3", 2}, {"model.sigma4", 3},
        {"model.sigma5", 4}, {"model.sigma6", 5}, {"model.sigma7", 6}, {"model.sigma8", 7}};

    if (n == "model.theta_h") return &m.theta_h;
    if (n == "model.theta_r") return &m.theta_r;
    if (n == "model.mu_h") return &m.mu_h;
    if (n == "model.mu_r") return &m.mu_r;
    if (n == "model.delta_h") return &m.delta_h;
    if (n == "model.delta_r") return &m.delta_r;
    if (n == "model.zeta") return &m.zeta;
    if (n == "model.gamma_h") return &m.gamma_h;
    if (n == "model.theta_q") return &m.theta_q;
    if (n == "model.p") return &m.p;
    if (n == "model.eta1") return &m.eta1;
    if (n == "model.eta2") return &m.eta2;
    if (n == "model.eta3") return &m.eta3;
    if (const auto it = sigma_index.find(n); it != sigma_index.end()) return &m.sigma[it->second];

    if (n == "bounds.M") return &c.bounds.M;
    if (n == "bounds.K_star") return &c.bounds.K_star;
    if (n == "bounds.N_r_floor") return &c.bounds.N_r_floor;
    if (n == "bounds.N_h_floor") return &c.bounds.N_h_floor;

    if (n.rfind("channel_", 0) == 0 && n.size() > 9 && n[8] >= '1' && n[8] <= '4' &&
        n[9] == '.') {
        HawkesChannel& ch = m.channels[static_cast<std::size_t>(n[8] - '1')];
        const std::string f = n.substr(10);
        if (f == "lambda0") return &ch.lambda0;
        if (f == "alpha") return &ch.alpha;
        if (f == "beta") return &ch.beta;
        if (f == "mean") return &ch.marks.mean;
        if (f == "cap") return &ch.marks.cap;
        return nullptr;
    }

    if (n == "simulation.dt") return &c.sim.dt;
    if (n == "simulation.horizon") return &c.sim.horizon;
    if (n == "simulation.positivity_floor") return &c.sim.positivity_floor;

    if (n == "initial_state.s_h") return &c.sim.initial_state.s_h;
    if (n == "initial_state.i_h") return &c.sim.initial_state.i_h;
    if (n == "initial_state.q_h") return &c.sim.initial_state.q_h;
    if (n == "initial_state.r_h") return &c.sim.initial_state.r_h;
    if (n == "initial_state.s_r") return &c.sim.initial_state.s_r;
    if (n == "initial_state.i_r") return &c.sim.initial_state.i_r;

    if (n == "scan.x_lo") return &c.scan.x_lo;
    if (n == "scan.x_hi") return &c.scan.x_hi;
    if (n == "scan.y_lo") return &c.scan.y_lo;
    if (n == "scan.y_hi") return &c.scan.y_hi;
    return nullptr;
}

int* int_slot(RunConfig& c, const std::string& n) {
    if (n == "simulation.n_paths") return &c.sim.n_paths;
    if (n == "scan.resolution") return &c.scan.resolution;
    return nullptr;
}

std::uint64_t* uint_slot(RunConfig& c, const std::string& n) {
    if (n == "simulation.master_seed") return &c.sim.master_seed;
    return nullptr;
}

std::string* string_slot(RunConfig& c, const std::string& n) {
    if (n == "output.dir") return &c.output.dir;
    if (n == "scan.x_name") return &c.scan.x_name;
    if (n == "scan.y_name") return &c.scan.y_name;
    return nullptr;
}

double parse_double(const std::string& raw, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(raw, &pos);
        if (pos != raw.size()) fail("malformed value for " + key + ": '" + raw + "'", line);
        if (!std::isfinite(v)) fail("non-finite value for " + key + ": '" + raw + "'", line);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail("malformed value for " + key + ": '" + raw + "'", line);
    }
}

int parse_int(const std::string& raw, const std::string& key, int line) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(raw, &pos);
        if (pos != raw.size()) fail("malformed value for " + key + ": '" + raw + "'", line);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail("malformed value for " + key + ": '" + raw + "'", line);
    }
}

std::uint64_t parse_uint64(const std::string& raw, const std::string& key, int line) {
    try {
        if (!raw.empty() && raw[0] == '-')
            fail("malformed value for " + key + ": '" + raw + "'", line);
        std::size_t pos = 0;
        const std::uint64_t v = std::stoull(raw, &pos);
        if (pos != raw.size()) fail("malformed value for " + key + ": '" + raw + "'", line);
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail("malformed value for " + key + ": '" + raw + "'", line);
    }
}

// validation messages name fields as sim.* / initial_state.Q_h; map them back
// to the config key that set the value, if any
int line_of(const std::map<std::string, int>& seen, std::string token) {
    if (token.rfind("sim.", 0) == 0) token = "simulation." + token.substr(4);
    if (token.rfind("initial_state.", 0) == 0)
        std::transform(token.begin(), token.end(), token.begin(),
                       [](unsigned char ch) { return std::tolower(ch); });
    if (const auto it = seen.find(token); it != seen.end()) return it->second;
    if (token.find('.') == std::string::npos) {
        for (const auto& [k, v] : seen)
            if (k.rfind(token + ".", 0) == 0) return v;
    }
    return 0;
}

} // namespace

ParsedConfig parse_config(const std::string& text) {
    ParsedConfig out;
    RunConfig& cfg = out.config;
    std::map<std::string, int> seen;

    std::istringstream in(text);
    std::string raw;
    std::string section;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') fail("malformed section header '" + line + "'", lineno);
            section = trim(line.substr(1, line.size() - 2));
            const auto& tbl = schema();
            const bool known = std::any_of(tbl.begin(), tbl.end(),
                                           [&](const auto& s) { return s.first == section; });
            if (!known) fail("unknown section [" + section + "]", lineno);
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value, got '" + line + "'", lineno);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) fail("key '" + key + "' appears outside any section", lineno);
        if (key.empty()) fail("empty key", lineno);
        const std::string full = section + "." + key;
        if (seen.count(full)) fail("duplicate key " + full, lineno);

        if (double* d = double_slot(cfg, full)) {
            *d = parse_double(value, full, lineno);
        } else if (int* i = int_slot(cfg, full)) {
            *i = parse_int(value, full, lineno);
        } else if (std::uint64_t* u = uint_slot(cfg, full)) {
            *u = parse_uint64(value, full, lineno);
        } else if (std::string* s = string_slot(cfg, full)) {
            if (value.empty()) fail("empty value for " + full, lineno);
            *s = value;
        } else {
            fail("unknown key " + full, lineno);
        }
        seen[full] = lineno;
    }

    try {
        cfg.model.validate();
        cfg.bounds.validate();
        cfg.sim.validate();
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        fail(msg, line_of(seen, msg.substr(0, msg.find(' '))));
    }

    const auto& axes = scan_axis_names();
    for (const char* side : {"x", "y"}) {
        const std::string& name = side[0] == 'x' ? cfg.scan.x_name : cfg.scan.y_name;
        const std::string key = std::string("scan.") + side + "_name";
        if (std::find(axes.begin(), axes.end(), name) == axes.end())
            fail(key + " must be a known axis, got '" + name + "'", line_of(seen, key));
    }
    if (!(cfg.scan.x_lo < cfg.scan.x_hi))
        fail("scan.x_lo must be < scan.x_hi", line_of(seen, "scan.x_lo"));
    if (!(cfg.scan.y_lo < cfg.scan.y_hi))
        fail("scan.y_lo must be < scan.y_hi", line_of(seen, "scan.y_lo"));
    if (cfg.scan.resolution < 2)
        fail("scan.resolution must be >= 2", line_of(seen, "scan.resolution"));

    for (const auto& [sec, keys] : schema()) {
        for (const auto& key : keys) {
            const std::string full = sec + "." + key;
            if (!seen.count(full)) out.defaulted.push_back(full);
        }
    }
    return out;
}

std::string serialize_config(const RunConfig& cfg) {
    RunConfig copy = cfg; // slots are non-const accessors
    std::ostringstream out;
    bool first = true;
    for (const auto& [sec, keys] : schema()) {
        if (!first) out << "\n";
        first = false;
        out << "[" << sec << "]\n";
        for (const auto& key : keys) {
            const std::string full = sec + "." + key;
            out << key << " = ";
            if (double* d = double_slot(copy, full)) {
                out << fmt_sci(*d);
            } else if (int* i = int_slot(copy, full)) {
                out << *i;
            } else if (std::uint64_t* u = uint_slot(copy, full)) {
                out << *u;
            } else {
                out << *string_slot(copy, full);
            }
            out << "\n";
        }
    }
    return out.str();
}

} // namespace mpox
