#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mpox/config.hpp"
#include "mpox/csv.hpp"

using namespace mpox;

namespace {

bool lists(const std::vector<std::string>& xs, const std::string& x) {
    return std::find(xs.begin(), xs.end(), x) != xs.end();
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("empty input yields the full baseline configuration") {
    const ParsedConfig parsed = parse_config("");
    CHECK(parsed.config == RunConfig{});
    CHECK(parsed.defaulted.size() == 64); // every schema key
    CHECK(lists(parsed.defaulted, "model.theta_h"));
    CHECK(lists(parsed.defaulted, "channel_3.alpha"));
    CHECK(lists(parsed.defaulted, "simulation.dt"));
    CHECK(lists(parsed.defaulted, "scan.resolution"));
}

TEST_CASE("single override keeps everything else at the baseline") {
    const ParsedConfig parsed = parse_config("[model]\nmu_h = 0.01\n");
    RunConfig expected;
    expected.model.mu_h = 0.01;
    CHECK(parsed.config == expected);
    CHECK(parsed.defaulted.size() == 63);
    CHECK_FALSE(lists(parsed.defaulted, "model.mu_h"));
}

TEST_CASE("comments, blank lines, and spacing are tolerated") {
    const std::string text =
        "# run setup\n"
        "\n"
        "[simulation]\n"
        "   dt   =  0.2   # coarse step\n"
        "horizon=250\n"
        "\n"
        "[output]\n"
        "dir = results/run_a\n";
    const ParsedConfig parsed = parse_config(text);
    CHECK(parsed.config.sim.dt == 0.2);
    CHECK(parsed.config.sim.horizon == 250.0);
    CHECK(parsed.config.output.dir == "results/run_a");
}

TEST_CASE("serialize and parse round-trip every field") {
    RunConfig cfg;
    cfg.model.mu_h = 9.17e-3;
    cfg.model.p = 0.45;
    cfg.model.sigma[4] = 0.22;
    cfg.model.channels[1] = HawkesChannel{3.3e-4, 0.41, 1.7, MarkDistribution{0.8, 2.5}};
    cfg.bounds.K_star = 0.004;
    cfg.sim.dt = 0.05;
    cfg.sim.horizon = 123.0;
    cfg.sim.n_paths = 17;
    cfg.sim.master_seed = 0xDEADBEEFCAFEULL;
    cfg.sim.initial_state = State{5000.0, 3.0, 1.0, 0.0, 900.0, 7.0};
    cfg.sim.positivity_floor = 1e-8;
    cfg.output.dir = "scratch";
    cfg.scan.x_name = "lambda0_joint";
    cfg.scan.x_lo = 1e-5;
    cfg.scan.x_hi = 1e-3;
    cfg.scan.y_name = "alpha2";
    cfg.scan.y_lo = 0.0;
    cfg.scan.y_hi = 0.9;
    cfg.scan.resolution = 33;

    const std::string text = serialize_config(cfg);
    const ParsedConfig parsed = parse_config(text);
    CHECK(parsed.config == cfg);
    CHECK(parsed.defaulted.empty());
}

TEST_CASE("structural errors name the line") {
    SUBCASE("unknown section") {
        try {
            parse_config("[models]\nmu_h = 1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("unknown section") != std::string::npos);
            CHECK(e.line == 1);
        }
    }
    SUBCASE("unknown key") {
        try {
            parse_config("[model]\nmu_x = 1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("unknown key model.mu_x") != std::string::npos);
            CHECK(e.line == 2);
        }
    }
    SUBCASE("malformed value") {
        try {
            parse_config("[simulation]\ndt = fast\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            CHECK(what.find("malformed value") != std::string::npos);
            CHECK(what.find("simulation.dt") != std::string::npos);
            CHECK(e.line == 2);
        }
    }
    SUBCASE("missing assignment, stray key, duplicate key") {
        CHECK_THROWS_WITH_AS(parse_config("[model]\nmu_h\n"),
                             doctest::Contains("expected key = value"), ConfigError);
        CHECK_THROWS_WITH_AS(parse_config("mu_h = 1\n"),
                             doctest::Contains("outside any section"), ConfigError);
        CHECK_THROWS_WITH_AS(parse_config("[model]\nmu_h = 1\nmu_h = 2\n"),
                             doctest::Contains("duplicate key model.mu_h"), ConfigError);
    }
    SUBCASE("negative seed and non-finite rate") {
        CHECK_THROWS_WITH_AS(parse_config("[simulation]\nmaster_seed = -5\n"),
                             doctest::Contains("malformed value"), ConfigError);
        CHECK_THROWS_WITH_AS(parse_config("[model]\ntheta_h = inf\n"),
                             doctest::Contains("non-finite"), ConfigError);
    }
}

TEST_CASE("invariant violations carry the key, the constraint, and the line") {
    SUBCASE("probability out of range") {
        try {
            parse_config("[model]\np = 1.5\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            CHECK(what.find("model.p") != std::string::npos);
            CHECK(what.find("[0, 1]") != std::string::npos);
            CHECK(e.line == 2);
        }
    }
    SUBCASE("supercritical channel") {
        try {
            parse_config("[channel_2]\nalpha = 1.5\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            CHECK(what.find("channel_2") != std::string::npos);
            CHECK(what.find("subcritical") != std::string::npos);
            CHECK(e.line == 2);
        }
    }
    SUBCASE("zero step") {
        try {
            parse_config("[simulation]\ndt = 0\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("sim.dt must be > 0") != std::string::npos);
            CHECK(e.line == 2);
        }
    }
    SUBCASE("negative initial compartment") {
        try {
            parse_config("[initial_state]\nq_h = -1\n");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("Q_h") != std::string::npos);
            CHECK(e.line == 2);
        }
    }
    SUBCASE("scan constraints") {
        CHECK_THROWS_WITH_AS(parse_config("[scan]\nx_name = bogus\n"),
                             doctest::Contains("scan.x_name"), ConfigError);
        CHECK_THROWS_WITH_AS(parse_config("[scan]\nresolution = 1\n"),
                             doctest::Contains("scan.resolution"), ConfigError);
        CHECK_THROWS_WITH_AS(parse_config("[scan]\nx_lo = 2\nx_hi = 1\n"),
                             doctest::Contains("scan.x_lo"), ConfigError);
    }
}

TEST_CASE("fmt_sci round-trips doubles exactly") {
    for (const double v : {0.0, 1.0, -1.5, 2e-4, 1.0115784086996076, 5.48e-6, 1e308, 1e-12}) {
        const std::string s = fmt_sci(v);
        CHECK(s.find('e') != std::string::npos);
        CHECK(std::stod(s) == v);
    }
}

TEST_CASE("csv writers produce the documented schema") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "mpox_csv_test";
    fs::create_directories(dir);

    SUBCASE("path and mean files") {
        PathRecord rec;
        rec.grid = {0.0, 0.5, 1.0};
        rec.states = {State{1, 2, 3, 4, 5, 6}, State{1.5, 2.5, 3.5, 4.5, 5.5, 6.5},
                      State{2, 3, 4, 5, 6, 7}};
        const auto file = (dir / "path.csv").string();
        write_path_csv(file, rec);
        const auto lines = read_lines(file);
        REQUIRE(lines.size() == 4);
        CHECK(lines[0] == "t,S_h,I_h,Q_h,R_h,S_r,I_r");
        std::stringstream row(lines[2]);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(row, cell, ',')) vals.push_back(std::stod(cell));
        REQUIRE(vals.size() == 7);
        CHECK(vals[0] == 0.5);
        CHECK(vals[3] == 3.5);

        MeanPath mean;
        mean.grid = rec.grid;
        mean.mean = rec.states;
        write_mean_csv((dir / "mean.csv").string(), mean);
        CHECK(read_lines(dir / "mean.csv") == lines);
    }

    SUBCASE("event files, plain and pooled") {
        EventLog a;
        a.times = {0.25, 2.0};
        a.marks = {1.5, 0.5};
        EventLog b;
        b.times = {1.0};
        b.marks = {2.5};
        write_events_csv((dir / "ev.csv").string(), a);
        const auto lines = read_lines(dir / "ev.csv");
        REQUIRE(lines.size() == 3);
        CHECK(lines[0] == "t,mark");

        write_pooled_events_csv((dir / "pooled.csv").string(), {&a, &b});
        const auto pooled = read_lines(dir / "pooled.csv");
        REQUIRE(pooled.size() == 4);
        std::vector<double> ts;
        for (std::size_t k = 1; k < pooled.size(); ++k)
            ts.push_back(std::stod(pooled[k].substr(0, pooled[k].find(','))));
        CHECK(std::is_sorted(ts.begin(), ts.end()));
        CHECK(ts == std::vector<double>{0.25, 1.0, 2.0});
    }

    SUBCASE("grid and contour files") {
        GridScan scan;
        scan.x = {0.0, 1.0};
        scan.y = {10.0, 20.0, 30.0};
        scan.z = {{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
        scan.contour = {{0.5, 10.0}, {0.75, 20.0}};
        write_grid_csv((dir / "grid.csv").string(), scan);
        const auto lines = read_lines(dir / "grid.csv");
        REQUIRE(lines.size() == 7); // header + 2 x 3 rows, x outer
        CHECK(lines[0] == "x,y,r0");
        CHECK(std::stod(lines[1].substr(0, lines[1].find(','))) == 0.0);
        CHECK(std::stod(lines[4].substr(0, lines[4].find(','))) == 1.0);

        write_contour_csv((dir / "contour.csv").string(), scan);
        const auto cl = read_lines(dir / "contour.csv");
        REQUIRE(cl.size() == 3);
        CHECK(cl[0] == "x,y");
    }

    SUBCASE("unwritable destination names the path") {
        CHECK_THROWS_WITH_AS(write_events_csv((dir / "nope" / "x.csv").string(), EventLog{}),
                             doctest::Contains("x.csv"), std::runtime_error);
    }

    fs::remove_all(dir);
}
