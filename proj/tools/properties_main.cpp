#include "pes/propertysuite.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"cross-module property suite"};
    std::uint64_t seed = 1;
    std::string scale = "quick";
    std::string json_path;
    app.add_option("--seed", seed, "randomized grid seed");
    app.add_option("--scale", scale, "quick | full")
        ->check(CLI::IsMember({"quick", "full"}));
    app.add_option("--json", json_path, "write machine-readable summary here");
    CLI11_PARSE(app, argc, argv);

    const auto summary = pes::run_all(
        seed, scale == "full" ? pes::PropertyScale::full : pes::PropertyScale::quick);
    pes::print_summary(std::cout, summary);
    if (!json_path.empty()) pes::write_summary_json(json_path, summary);
    return summary.all_pass() ? 0 : 1;
}
