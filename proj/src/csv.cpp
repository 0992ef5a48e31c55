#include "mpox/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>
#include <vector>

namespace mpox {

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot write " + path);
    return file;
}

void finish_or_throw(std::ofstream& file, const std::string& path) {
    file.flush();
    if (!file) throw std::runtime_error("write failed for " + path);
}

void write_state_rows(std::ofstream& file, const std::vector<double>& grid,
                      const std::vector<State>& states) {
    file << "t,S_h,I_h,Q_h,R_h,S_r,I_r\n";
    for (std::size_t k = 0; k < grid.size(); ++k) {
        file << fmt_sci(grid[k]);
        for (int i = 0; i < 6; ++i) file << "," << fmt_sci(states[k][i]);
        file << "\n";
    }
}

} // namespace

std::string fmt_sci(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void write_path_csv(const std::string& path, const PathRecord& record) {
    auto file = open_or_throw(path);
    write_state_rows(file, record.grid, record.states);
    finish_or_throw(file, path);
}

void write_events_csv(const std::string& path, const EventLog& log) {
    auto file = open_or_throw(path);
    file << "t,mark\n";
    for (std::size_t k = 0; k < log.times.size(); ++k)
        file << fmt_sci(log.times[k]) << "," << fmt_sci(log.marks[k]) << "\n";
    finish_or_throw(file, path);
}

void write_pooled_events_csv(const std::string& path,
                             const std::vector<const EventLog*>& logs) {
    std::vector<std::pair<double, double>> rows;
    for (const EventLog* log : logs) {
        for (std::size_t k = 0; k < log->times.size(); ++k)
            rows.emplace_back(log->times[k], log->marks[k]);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    auto file = open_or_throw(path);
    file << "t,mark\n";
    for (const auto& [t, mark] : rows) file << fmt_sci(t) << "," << fmt_sci(mark) << "\n";
    finish_or_throw(file, path);
}

void write_mean_csv(const std::string& path, const MeanPath& mean) {
    auto file = open_or_throw(path);
    write_state_rows(file, mean.grid, mean.mean);
    finish_or_throw(file, path);
}

void write_grid_csv(const std::string& path, const GridScan& scan) {
    auto file = open_or_throw(path);
    file << "x,y,r0\n";
    for (std::size_t i = 0; i < scan.x.size(); ++i)
        for (std::size_t j = 0; j < scan.y.size(); ++j)
            file << fmt_sci(scan.x[i]) << "," << fmt_sci(scan.y[j]) << ","
                 << fmt_sci(scan.z[i][j]) << "\n";
    finish_or_throw(file, path);
}

void write_contour_csv(const std::string& path, const GridScan& scan) {
    auto file = open_or_throw(path);
    file << "x,y\n";
    for (const auto& [cx, cy] : scan.contour) file << fmt_sci(cx) << "," << fmt_sci(cy) << "\n";
    finish_or_throw(file, path);
}

} // namespace mpox
