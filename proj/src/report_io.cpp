#include "pes/report_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace pes {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Verdict verdict_from_string(const std::string& s) {
    if (s == "stable") return Verdict::stable;
    if (s == "attractive_only") return Verdict::attractive_only;
    if (s == "failed") return Verdict::failed;
    throw std::invalid_argument("unknown verdict '" + s + "'");
}

}  // namespace

void write_stability_report(std::ostream& out, const StabilityReport& report) {
    out << "stability_report 1\n";
    out << "verdict " << to_string(report.verdict) << "\n";
    out << "delta " << fmt17(report.delta) << "\n";
    out << "y_dim " << report.y_dim << "\n";
    out << "y_star";
    for (int i = 0; i < report.y_star.size(); ++i) out << ' ' << fmt17(report.y_star[i]);
    out << "\n";
    for (const auto& res : report.results) {
        out << "rho " << fmt17(res.rho) << " epsilon_bar " << fmt17(res.epsilon_bar) << " t1 "
            << fmt17(res.t1) << " attained " << (res.attained ? 1 : 0) << " bounded "
            << (res.bounded ? 1 : 0) << "\n";
        for (const auto& run : res.runs) {
            out << "run eps " << fmt17(run.eps) << " t0 " << fmt17(run.t0) << " sup "
                << fmt17(run.sup_y_dev_after_t1) << " converged " << (run.converged ? 1 : 0)
                << " boundedness " << (run.boundedness_run ? 1 : 0) << " x0";
            for (int i = 0; i < run.x0.size(); ++i) out << ' ' << fmt17(run.x0[i]);
            out << "\n";
        }
    }
}

void write_stability_report(const std::string& path, const StabilityReport& report) {
    std::ofstream out(path);
    require(out.good(), "write_stability_report: cannot open " + path);
    write_stability_report(out, report);
}

StabilityReport read_stability_report(std::istream& in) {
    StabilityReport report;
    std::string line;
    require(static_cast<bool>(std::getline(in, line)) && line.starts_with("stability_report"),
            "read_stability_report: bad magic line");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string key;
        ss >> key;
        if (key == "verdict") {
            std::string v;
            ss >> v;
            report.verdict = verdict_from_string(v);
        } else if (key == "delta") {
            ss >> report.delta;
        } else if (key == "y_dim") {
            ss >> report.y_dim;
        } else if (key == "y_star") {
            std::vector<double> vals;
            double v = 0;
            while (ss >> v) vals.push_back(v);
            report.y_star = Eigen::Map<Vec>(vals.data(), static_cast<long>(vals.size()));
        } else if (key == "rho") {
            RhoResult res;
            std::string tag;
            ss >> res.rho >> tag >> res.epsilon_bar >> tag >> res.t1;
            int flag = 0;
            ss >> tag >> flag;
            res.attained = flag != 0;
            ss >> tag >> flag;
            res.bounded = flag != 0;
            report.results.push_back(std::move(res));
        } else if (key == "run") {
            require(!report.results.empty(), "read_stability_report: run before rho");
            StabilityRun run;
            std::string tag;
            int flag = 0;
            ss >> tag >> run.eps >> tag >> run.t0 >> tag >> run.sup_y_dev_after_t1;
            ss >> tag >> flag;
            run.converged = flag != 0;
            ss >> tag >> flag;
            run.boundedness_run = flag != 0;
            ss >> tag;  // "x0"
            std::vector<double> vals;
            double v = 0;
            while (ss >> v) vals.push_back(v);
            run.x0 = Eigen::Map<Vec>(vals.data(), static_cast<long>(vals.size()));
            report.results.back().runs.push_back(std::move(run));
        } else {
            throw std::invalid_argument("read_stability_report: unknown key '" + key + "'");
        }
    }
    return report;
}

StabilityReport read_stability_report(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "read_stability_report: cannot open " + path);
    return read_stability_report(in);
}

}  // namespace pes
