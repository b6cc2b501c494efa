#include "pes/config.hpp"

#include <fstream>
#include <sstream>

namespace pes {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_numbers(const std::string& value, int line) {
    std::vector<double> out;
    std::istringstream ss(value);
    std::string token;
    while (ss >> token) {
        try {
            std::size_t used = 0;
            const double v = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            out.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError(line, "expected a number, got '" + token + "'");
        }
    }
    return out;
}

double parse_one(const std::string& value, int line) {
    const auto nums = parse_numbers(value, line);
    if (nums.size() != 1) throw ConfigError(line, "expected a single number");
    return nums[0];
}

Vec to_vec(const std::vector<double>& v) {
    Vec out(static_cast<long>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<long>(i)] = v[i];
    return out;
}

std::vector<Vec> parse_vector_list(const std::string& value, int line) {
    std::vector<Vec> out;
    std::string group;
    std::istringstream ss(value);
    while (std::getline(ss, group, ';')) {
        const auto nums = parse_numbers(trim(group), line);
        if (nums.empty()) throw ConfigError(line, "empty vector in list");
        out.push_back(to_vec(nums));
    }
    return out;
}

bool parse_bool(const std::string& value, int line) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(line, "expected a boolean, got '" + value + "'");
}

}  // namespace

Config parse_config(std::istream& in) {
    Config cfg;
    std::string section;
    std::string line;
    int line_no = 0;
    bool saw_run = false;

    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section == "run") {
                saw_run = true;
            } else if (section == "stability") {
                if (!cfg.stability) cfg.stability.emplace();
            } else if (section == "check") {
                if (!cfg.check) cfg.check.emplace();
            } else if (section == "sweep") {
                if (!cfg.sweep) cfg.sweep.emplace();
            } else {
                throw ConfigError(line_no, "unknown section [" + section + "]");
            }
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(line_no, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, "empty key");
        if (value.empty()) throw ConfigError(line_no, "empty value for '" + key + "'");

        if (section == "run") {
            auto& run = cfg.run;
            if (key == "scenario") {
                run.scenario = value;
            } else if (key == "cost") {
                run.cost = value;
            } else if (key == "gain_kind") {
                run.gain_kind = value;
            } else if (key == "epsilon") {
                run.epsilon = parse_one(value, line_no);
            } else if (key == "gammas") {
                run.gammas = parse_numbers(value, line_no);
            } else if (key == "x0") {
                run.x0 = to_vec(parse_numbers(value, line_no));
            } else if (key == "T") {
                run.T = parse_one(value, line_no);
            } else if (key == "substeps") {
                run.substeps = static_cast<int>(parse_one(value, line_no));
            } else if (key == "seed") {
                run.seed = static_cast<long>(parse_one(value, line_no));
            } else if (key == "output_dir") {
                run.output_dir = value;
            } else if (key == "inertia") {
                run.inertia = parse_numbers(value, line_no);
            } else {
                throw ConfigError(line_no, "unknown key '" + key + "' in [run]");
            }
        } else if (section == "stability") {
            auto& st = *cfg.stability;
            if (key == "delta") {
                st.delta = parse_one(value, line_no);
            } else if (key == "rho") {
                st.rho = parse_numbers(value, line_no);
            } else if (key == "eps") {
                st.eps = parse_numbers(value, line_no);
            } else if (key == "z0") {
                st.z0 = parse_vector_list(value, line_no);
            } else if (key == "t0") {
                st.t0 = parse_numbers(value, line_no);
            } else if (key == "T") {
                st.T = parse_one(value, line_no);
            } else if (key == "samples") {
                st.samples = static_cast<int>(parse_one(value, line_no));
            } else if (key == "averaged") {
                st.averaged = parse_bool(value, line_no);
            } else {
                throw ConfigError(line_no, "unknown key '" + key + "' in [stability]");
            }
        } else if (section == "check") {
            auto& ck = *cfg.check;
            if (key == "grid_lo") {
                ck.grid_lo = to_vec(parse_numbers(value, line_no));
            } else if (key == "grid_hi") {
                ck.grid_hi = to_vec(parse_numbers(value, line_no));
            } else if (key == "grid_points") {
                ck.grid_points = static_cast<int>(parse_one(value, line_no));
            } else if (key == "defect_eps") {
                ck.defect_eps = parse_numbers(value, line_no);
            } else if (key == "defect_x0") {
                ck.defect_x0 = to_vec(parse_numbers(value, line_no));
            } else {
                throw ConfigError(line_no, "unknown key '" + key + "' in [check]");
            }
        } else if (section == "sweep") {
            auto& sw = *cfg.sweep;
            if (key == "eps") {
                sw.eps = parse_numbers(value, line_no);
            } else if (key == "x0") {
                sw.x0_list = parse_vector_list(value, line_no);
            } else if (key == "T") {
                sw.T = parse_one(value, line_no);
            } else {
                throw ConfigError(line_no, "unknown key '" + key + "' in [sweep]");
            }
        } else {
            throw ConfigError(line_no, "key '" + key + "' outside any section");
        }
    }

    if (!saw_run) throw ConfigError("config has no [run] section");
    if (cfg.run.scenario.empty()) throw ConfigError("[run] must name a scenario");
    if (cfg.run.epsilon <= 0.0) throw ConfigError("[run] epsilon must be positive");
    if (cfg.run.T < 0.0) throw ConfigError("[run] T must be nonnegative");
    if (cfg.run.substeps < 32) throw ConfigError("[run] substeps must be at least 32");
    return cfg;
}

Config parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw ConfigError("cannot open config file " + path);
    return parse_config(in);
}

}  // namespace pes
