#pragma once

#include "tangency/config.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tangency {

struct Assertion {
    std::string id;
    std::string command;
    bool passed = false;
    std::string detail;
};

struct OutputFile {
    std::string name;
    std::string content;
};

struct RunResult {
    int exit_status = 0;
    std::string report_json;
    std::vector<Assertion> assertions;
    std::vector<OutputFile> files;  // report.json last
};

/// Runs one command (or `all`) and builds the report and output files in
/// memory. Exit status 0 when every assertion passes, 1 otherwise. Domain
/// error for an unknown command.
RunResult run_experiment(const ExperimentConfig& cfg, const std::string& command);

/// Writes every output file into dir, creating it if needed. Io error on
/// failure.
void write_outputs(const RunResult& result, const std::string& dir);

/// Parses, runs and writes. Config or I/O problems give exit status 2 and a
/// report holding the message; nothing is written in that case.
RunResult run_from_text(const std::string& config_text, const std::string& command,
                        const std::optional<std::string>& out_dir, const std::optional<std::uint64_t>& seed);

}  // namespace tangency
