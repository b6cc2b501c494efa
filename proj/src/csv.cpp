#include "pes/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace pes {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    require(!traj.states.empty(), "write_trajectory_csv: empty trajectory");
    const int n = static_cast<int>(traj.states.front().size());
    const bool with_cost = traj.cost.size() == traj.size();
    const bool with_controls = traj.controls.size() == traj.size();
    const int m = with_controls ? static_cast<int>(traj.controls.front().size()) : 0;

    out << "t";
    for (int i = 1; i <= n; ++i) out << ",x" << i;
    if (with_cost) out << ",J";
    for (int i = 1; i <= m; ++i) out << ",u" << i;
    out << "\n";

    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << fmt17(traj.times[k]);
        for (int i = 0; i < n; ++i) out << ',' << fmt17(traj.states[k][i]);
        if (with_cost) out << ',' << fmt17(traj.cost[k]);
        for (int i = 0; i < m; ++i) out << ',' << fmt17(traj.controls[k][i]);
        out << "\n";
    }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    std::ofstream out(path);
    require(out.good(), "write_trajectory_csv: cannot open " + path);
    write_trajectory_csv(out, traj);
}

Trajectory read_trajectory_csv(std::istream& in) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "read_trajectory_csv: missing header");
    const auto header = split_csv_line(line);
    require(!header.empty() && header[0] == "t", "read_trajectory_csv: bad header");

    int n = 0;
    int m = 0;
    bool with_cost = false;
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c] == "J") {
            with_cost = true;
        } else if (header[c].starts_with("x")) {
            ++n;
        } else if (header[c].starts_with("u")) {
            ++m;
        } else {
            throw std::invalid_argument("read_trajectory_csv: unknown column " + header[c]);
        }
    }

    Trajectory traj;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        require(static_cast<int>(cells.size()) == 1 + n + (with_cost ? 1 : 0) + m,
                "read_trajectory_csv: row width mismatch");
        std::size_t c = 0;
        traj.times.push_back(std::stod(cells[c++]));
        Vec x(n);
        for (int i = 0; i < n; ++i) x[i] = std::stod(cells[c++]);
        traj.states.push_back(std::move(x));
        if (with_cost) traj.cost.push_back(std::stod(cells[c++]));
        if (m > 0) {
            Vec u(m);
            for (int i = 0; i < m; ++i) u[i] = std::stod(cells[c++]);
            traj.controls.push_back(std::move(u));
        }
    }
    if (traj.times.size() >= 2) traj.step = traj.times[1] - traj.times[0];
    return traj;
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "read_trajectory_csv: cannot open " + path);
    return read_trajectory_csv(in);
}

}  // namespace pes
