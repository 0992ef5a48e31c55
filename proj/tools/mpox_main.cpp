#include "mpox/analysis.hpp"
#include "mpox/config.hpp"
#include "mpox/csv.hpp"
#include "mpox/hawkes.hpp"
#include "mpox/model.hpp"
#include "mpox/simulator.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mpox;

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> paths;
    std::optional<double> horizon;
    std::optional<double> dt;
};

void add_common_options(CLI::App& sub, CliOptions& opt) {
    sub.add_option("--config", opt.config_path, "run configuration file (omitted = baseline)");
    sub.add_option("--out", opt.out_dir, "output directory (overrides output.dir)");
    sub.add_option("--seed", opt.seed, "master seed (overrides simulation.master_seed)");
    sub.add_option("--paths", opt.paths, "ensemble size (overrides simulation.n_paths)");
    sub.add_option("--horizon", opt.horizon, "horizon in days (overrides simulation.horizon)");
    sub.add_option("--dt", opt.dt, "grid step in days (overrides simulation.dt)");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct ResolvedRun {
    RunConfig cfg;
    std::vector<std::string> defaulted;
};

ResolvedRun resolve(const CliOptions& opt, bool single_path) {
    const std::string text = opt.config_path.empty() ? std::string{} : read_file(opt.config_path);
    ParsedConfig parsed = parse_config(text);
    ResolvedRun run{std::move(parsed.config), std::move(parsed.defaulted)};

    auto drop = [&run](const char* key) {
        std::erase(run.defaulted, std::string(key));
    };
    if (opt.seed) {
        run.cfg.sim.master_seed = *opt.seed;
        drop("simulation.master_seed");
    }
    if (opt.paths) {
        run.cfg.sim.n_paths = *opt.paths;
        drop("simulation.n_paths");
    }
    if (opt.horizon) {
        run.cfg.sim.horizon = *opt.horizon;
        drop("simulation.horizon");
    }
    if (opt.dt) {
        run.cfg.sim.dt = *opt.dt;
        drop("simulation.dt");
    }
    if (!opt.out_dir.empty()) {
        run.cfg.output.dir = opt.out_dir;
        drop("output.dir");
    }
    if (single_path && run.cfg.sim.n_paths != 1) {
        run.cfg.sim.n_paths = 1;
        drop("simulation.n_paths");
    }
    run.cfg.sim.validate(); // flag overrides can break cross-field constraints
    return run;
}

fs::path prepare_output_dir(const ResolvedRun& run) {
    const fs::path dir(run.cfg.output.dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw std::runtime_error("cannot create output directory " + dir.string() + ": " +
                                 ec.message());
    }
    return dir;
}

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out.good()) throw std::runtime_error("write failed: " + path.string());
}

// Leading comment lines carry run metadata; the body re-parses to the exact
// config that produced the run.
void write_manifest(const fs::path& dir, const RunConfig& cfg, const std::string& command) {
    std::string text;
    text += "# mpoxsim manifest\n";
    text += "# version = ";
    text += kVersion;
    text += "\n# command = " + command + "\n\n";
    text += serialize_config(cfg);
    write_text_file(dir / "manifest.cfg", text);
}

void write_provenance(const fs::path& dir, const std::vector<std::string>& defaulted) {
    std::string text;
    for (const std::string& key : defaulted) text += key + " (baseline default)\n";
    write_text_file(dir / "provenance.log", text);
}

std::string path_file_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "path_%04d.csv", index);
    return buf;
}

void print_kv(const char* key, double value) {
    std::cout << key << " = " << fmt_sci(value) << "\n";
}

void print_kv(const char* key, const std::string& value) {
    std::cout << key << " = " << value << "\n";
}

int run_r0(const ResolvedRun& run) {
    const R0Breakdown b = compute_r0(run.cfg.model);
    print_kv("summand_contact_human", b.contact_human);
    print_kv("summand_contact_rodent", b.contact_rodent);
    print_kv("summand_jump_i_h", b.jump_ih);
    print_kv("summand_jump_q_h", b.jump_qh);
    print_kv("denominator", b.denominator);
    print_kv("r0", b.r0);
    print_kv("extinction_exponent", extinction_exponent(run.cfg.model));
    return 0;
}

std::string opt_str(const std::optional<double>& v) {
    return v ? fmt_sci(*v) : std::string("inapplicable");
}

int run_thresholds(const ResolvedRun& run) {
    const ThresholdReport rep = threshold_report(run.cfg.model, run.cfg.bounds);
    print_kv("r0.summand_contact_human", rep.r0.contact_human);
    print_kv("r0.summand_contact_rodent", rep.r0.contact_rodent);
    print_kv("r0.summand_jump_i_h", rep.r0.jump_ih);
    print_kv("r0.summand_jump_q_h", rep.r0.jump_qh);
    print_kv("r0.denominator", rep.r0.denominator);
    print_kv("r0.value", rep.r0.r0);
    print_kv("extinction_exponent", rep.extinction_exp);
    print_kv("extinction_predicted", std::string(rep.extinction_predicted ? "1" : "0"));
    print_kv("rodent.a", rep.rodent.a);
    print_kv("rodent.bound", opt_str(rep.rodent.bound));
    print_kv("rodent_persistent", std::string(rep.rodent_persistent ? "1" : "0"));
    print_kv("human.eps_h", rep.human.eps_h);
    print_kv("human.lambda_h", rep.human.lambda_h);
    print_kv("human.lambda0_h", rep.human.lambda0_h);
    print_kv("human.l2", rep.human.l2);
    print_kv("human.bound", opt_str(rep.human.bound));
    print_kv("human_persistent", std::string(rep.human_persistent ? "1" : "0"));
    print_kv("indeterminate", std::string(rep.indeterminate ? "1" : "0"));
    return 0;
}

int report_failures(const EnsembleResult& res) {
    for (const PathFailureInfo& f : res.failures) {
        std::cerr << "error: path " << f.path_index << " failed at t = " << fmt_sci(f.time)
                  << " (" << kCompartmentNames[static_cast<std::size_t>(f.component)]
                  << "): " << f.message << "\n";
    }
    return res.failures.empty() ? 0 : 1;
}

int run_ensemble(const ResolvedRun& run, const fs::path& dir) {
    const EnsembleResult res = simulate_ensemble(run.cfg.model, run.cfg.sim);

    long n_events = 0;
    for (const PathRecord& rec : res.paths) {
        if (rec.grid.empty()) continue; // failed path, reported below
        write_path_csv((dir / path_file_name(rec.path_index)).string(), rec);
        for (const EventLog& log : rec.events) n_events += static_cast<long>(log.size());
    }
    write_mean_csv((dir / "mean.csv").string(), res.mean);
    for (int c = 0; c < 4; ++c) {
        std::vector<const EventLog*> logs;
        for (const PathRecord& rec : res.paths) {
            if (!rec.grid.empty()) logs.push_back(&rec.events[static_cast<std::size_t>(c)]);
        }
        const std::string name = "events_channel_" + std::to_string(c + 1) + ".csv";
        write_pooled_events_csv((dir / name).string(), logs);
    }

    std::cout << "paths = " << run.cfg.sim.n_paths << "\n"
              << "failed_paths = " << res.failures.size() << "\n"
              << "events = " << n_events << "\n"
              << "clamp_activations = " << res.total_clamps << "\n"
              << "output_dir = " << dir.string() << "\n";
    return report_failures(res);
}

int run_simulate(const ResolvedRun& run, const fs::path& dir) {
    const EnsembleResult res = simulate_ensemble(run.cfg.model, run.cfg.sim);
    if (res.failures.empty()) {
        const PathRecord& rec = res.paths.front();
        write_path_csv((dir / path_file_name(0)).string(), rec);
        write_mean_csv((dir / "mean.csv").string(), res.mean);
        for (int c = 0; c < 4; ++c) {
            const std::string name = "events_channel_" + std::to_string(c + 1) + ".csv";
            write_events_csv((dir / name).string(), rec.events[static_cast<std::size_t>(c)]);
        }
        std::cout << "grid_points = " << rec.grid.size() << "\n"
                  << "clamp_activations = " << rec.clamp_count << "\n"
                  << "output_dir = " << dir.string() << "\n";
    }
    return report_failures(res);
}

int run_scan(const ResolvedRun& run, const fs::path& dir) {
    const ScanConfig& sc = run.cfg.scan;
    const AxisSpec xa{sc.x_name, sc.x_lo, sc.x_hi};
    const AxisSpec ya{sc.y_name, sc.y_lo, sc.y_hi};
    const GridScan g = scan_r0(run.cfg.model, xa, ya, sc.resolution, sc.resolution);
    write_grid_csv((dir / "grid.csv").string(), g);
    write_contour_csv((dir / "contour.csv").string(), g);
    std::cout << "grid_rows = " << g.x.size() * g.y.size() << "\n"
              << "contour_points = " << g.contour.size() << "\n"
              << "output_dir = " << dir.string() << "\n";
    return 0;
}

int run_validate_hawkes(const ResolvedRun& run) {
    const SimConfig& sim = run.cfg.sim;
    for (int c = 0; c < 4; ++c) {
        const HawkesChannel& ch = run.cfg.model.channels[static_cast<std::size_t>(c)];
        const std::string pre = "channel_" + std::to_string(c + 1);
        auto kv = [&pre](const char* key, double v) {
            std::cout << pre << "." << key << " = " << fmt_sci(v) << "\n";
        };
        if (ch.lambda0 == 0.0) {
            std::cout << pre << ".active = 0\n";
            continue;
        }
        std::cout << pre << ".active = 1\n";
        kv("stationary_intensity", stationary_intensity(ch));
        kv("expected_intensity_horizon", expected_intensity(ch, sim.horizon));
        kv("expected_count_horizon", expected_count(ch, sim.horizon));

        const int n_paths = std::max(sim.n_paths, 2);
        const LlnReport rep = hawkes_lln_check(
            ch, sim.horizon, n_paths, stream_seed(sim.master_seed, 0, 16 + c));
        kv("lln_mean", rep.empirical_mean);
        kv("lln_stderr", rep.stderr_mean);
        kv("lln_deviation", rep.deviation);

        std::vector<double> gaps;
        double count = 0.0;
        for (int i = 0; i < n_paths; ++i) {
            Rng rng(stream_seed(stream_seed(sim.master_seed, 1, 16 + c),
                                static_cast<std::uint64_t>(i), 1));
            const EventLog log = simulate_events(ch, sim.horizon, rng, c + 1);
            count += static_cast<double>(log.size());
            const std::vector<double> g = rescaled_gaps(ch, log);
            gaps.insert(gaps.end(), g.begin(), g.end());
        }
        kv("mean_count", count / n_paths);
        kv("ks_n_gaps", static_cast<double>(gaps.size()));
        if (!gaps.empty()) {
            kv("ks_statistic", ks_statistic_exp1(gaps));
            std::cout << pre << ".ks_pass_1pct = " << (ks_test_exp1(gaps, 0.01) ? 1 : 0) << "\n";
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochastic mpox transmission model with self-exciting jump channels"};
    app.require_subcommand(1);
    CliOptions opt;

    CLI::App* cmd_r0 = app.add_subcommand("r0", "basic reproduction number breakdown");
    CLI::App* cmd_thresholds =
        app.add_subcommand("thresholds", "extinction and persistence threshold report");
    CLI::App* cmd_simulate = app.add_subcommand("simulate", "one path with event logs");
    CLI::App* cmd_ensemble = app.add_subcommand("ensemble", "seeded ensemble with mean path");
    CLI::App* cmd_scan = app.add_subcommand("scan", "r0 grid scan with level-1 contour");
    CLI::App* cmd_validate =
        app.add_subcommand("validate-hawkes", "moment and LLN report per jump channel");
    for (CLI::App* sub : {cmd_r0, cmd_thresholds, cmd_simulate, cmd_ensemble, cmd_scan,
                          cmd_validate}) {
        add_common_options(*sub, opt);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const ResolvedRun run = resolve(opt, cmd_simulate->parsed());
        const fs::path dir = prepare_output_dir(run);
        const std::string command = app.get_subcommands().front()->get_name();
        write_manifest(dir, run.cfg, command);
        write_provenance(dir, run.defaulted);

        if (cmd_r0->parsed()) return run_r0(run);
        if (cmd_thresholds->parsed()) return run_thresholds(run);
        if (cmd_simulate->parsed()) return run_simulate(run, dir);
        if (cmd_ensemble->parsed()) return run_ensemble(run, dir);
        if (cmd_scan->parsed()) return run_scan(run, dir);
        return run_validate_hawkes(run);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
