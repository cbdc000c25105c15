#pragma once

#include "tangency/model.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace tangency {

struct IntRange {
    int lo = 0;
    int hi = 0;
};

struct Tolerances {
    double order = 0.02;
    double order_coefficient = 0.02;
    double tangent_ratio_rel = 0.02;
    double exponent_D = 0.03;
    double exponent_W = 0.05;
    double exponent_H = 0.05;
    double rho = 0.3;
    double pair_rel = 1e-3;
    double c_n = 1e-3;
    double s_step = 1e-3;
    double power_fit = 1e-6;
    double lemma_constant_rel = 0.01;
    double probe_slope = 0.02;
    double band_factor = 1.03;
    double eigen_rel = 1e-3;
    double jacobian_fd_rel = 1e-6;
};

struct ExperimentConfig {
    ModelSystem system;
    IntRange n_range{8, 18};
    IntRange ratio_n_range{14, 20};
    IntRange moduli_n_range{5, 20};
    IntRange cascade_n_range{10, 22};
    IntRange intersection_n_range{10, 16};
    IntRange order_probe_j_range{0, 10};
    int c_n_from = 15;
    long rescale_k = 3;
    std::vector<double> eps_grid{0.02, 0.01, 0.005};
    std::vector<double> s_grid{0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125, 0.0015625};
    Tolerances tolerances;
    std::string output_dir = "out";
    std::vector<std::string> commands;
    std::uint64_t seed = 0;
    /// Hex SHA-256 of the config text.
    std::string sha256;
};

/// Parses the JSON config. Unknown keys, wrong types, non-positive
/// tolerances and invalid seeds raise ErrorCode::Config.
ExperimentConfig parse_config(const std::string& text);

std::string sha256_hex(const std::string& data);

/// The commands accepted on the command line, `all` last.
const std::vector<std::string>& known_commands();

}  // namespace tangency
