#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "odt/image.hpp"

namespace odt {

/// Experiment settings with defaults matching the synthetic study: 256 grid,
/// 368 rays, orientation sweep {4,18,90,180,360}, Th = 1e-5, n_r = 1.
/// Parsed from `key = value` text; '#' starts a comment; lists are
/// comma-separated; "inf" is accepted for noiseless MSNR entries.
struct ExperimentConfig {
    std::string phantom = "fibers";  // fibers | ball | shepp_logan
    double delta_n = -1.0;           // negative selects the per-phantom default
    int n0 = 256;
    int n_tau = 368;
    std::vector<int> n_theta_list = {4, 18, 90, 180, 360};
    double delta_r = 4.7e-3;
    double delta_tau = 0.0;  // 0 selects the matched-FoV value delta_r*n0/n_tau
    double n_r = 1.0;
    std::vector<double> msnr_list = {std::numeric_limits<double>::infinity()};
    double threshold = 1e-5;
    long max_iter = 500000;
    double c_balance = 0.0;  // 0 selects 1000 (250 for shepp_logan)
    bool adaptive = true;
    double eps_acq = 1e-14;  // acquisition-grade NFFT accuracy
    double eps_rec = 1e-10;  // reconstruction-grade NFFT accuracy
    double kappa = 2.0;
    double model_snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    std::vector<std::string> methods = {"fbp", "me", "tvl2"};

    double phantom_delta_n() const;
    double balance_constant() const;
    double matched_delta_tau() const { return delta_tau > 0.0 ? delta_tau : delta_r * n0 / n_tau; }
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Phantom selected by config.phantom on the config grid.
RimImage build_phantom(const ExperimentConfig& config);

}  // namespace odt
