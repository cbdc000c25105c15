#include "tangency/tangency.h"

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace {

constexpr int kExitConfig = 2;

std::optional<std::string> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_failures(const std::string& report) {
    const auto j = nlohmann::json::parse(report, nullptr, false);
    if (j.is_discarded()) return;
    if (j.contains("error")) {
        std::cerr << "error: " << j["error"].value("message", "") << "\n";
        return;
    }
    for (const auto& a : j.value("assertions", nlohmann::json::array()))
        if (!a.value("passed", true))
            std::cerr << "FAILED " << a.value("id", "") << ": " << a.value("detail", "") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical lab for a surface diffeomorphism with a homoclinic cubic tangency"};
    app.set_version_flag("--version", std::string(tl_version()));
    std::string command;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    const std::vector<std::string> commands{"validate", "leaves",   "rects",  "slopes",    "cascade",
                                            "classify", "moduli", "conjugacy", "all"};
    app.add_option("command", command, "Experiment to run")->required()->check(CLI::IsMember(commands));
    app.add_option("--config", config_path, "Experiment config (JSON)")->required();
    auto* out_opt = app.add_option("--out", out_dir, "Output directory (overrides output_dir)");
    auto* seed_opt = app.add_option("--seed", seed, "Seed for random sampling (overrides seed)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    const auto text = read_file(config_path);
    if (!text) {
        std::cerr << "error: cannot read config '" << config_path << "'\n";
        return kExitConfig;
    }
    int exit_status = kExitConfig;
    char* report = nullptr;
    const tl_status st = tl_run_command(text->c_str(), command.c_str(), out_opt->count() ? out_dir.c_str() : nullptr,
                                        seed_opt->count() ? &seed : nullptr, &exit_status, &report);
    if (st != TL_OK) {
        std::cerr << "error: " << tl_status_string(st) << ": " << tl_last_error() << "\n";
        return 1;
    }
    const std::string report_text = report;
    tl_string_free(report);
    std::cout << report_text;
    if (exit_status != 0) print_failures(report_text);
    return exit_status;
}
