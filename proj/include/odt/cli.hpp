#pragma once

#include <cstdint>
#include <limits>
#include <iosfwd>
#include <string>

#include "odt/config.hpp"

namespace odt::cli {

struct CommonOptions {
    std::string out_dir = "out";
    bool force = false;
};

struct PhantomOptions {
    std::string kind = "fibers";
    double delta_n = -1.0;  // negative = per-kind default
    int n0 = 256;
    double delta_r = 4.7e-3;
};

/// Writes phantom_{kind}.odti and a .pgm preview; returns the image path.
std::string cmd_phantom(const PhantomOptions& opt, const CommonOptions& common,
                        std::ostream& log);

struct SimulateOptions {
    std::string phantom_path;
    int n_tau = 368;
    int n_theta = 360;
    double n_r = 1.0;
    double msnr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 1;
    std::string model = "odt";  // odt | at
    double eps_acq = 1e-14;
    double eps_rec = 1e-10;  // accuracy the budget charges for reconstruction
    double kappa = 2.0;
    double model_snr_db = std::numeric_limits<double>::infinity();
};

/// Simulates measurements through the acquisition-grade operator, adds noise,
/// and writes {base}_clean.odts, {base}_noisy.odts, {base}.odtf and
/// {base}_budget.txt. Returns the base path.
std::string cmd_simulate(const SimulateOptions& opt, const CommonOptions& common,
                         std::ostream& log);

struct ReconstructOptions {
    std::string fdm_path;
    std::string method = "tvl2";  // fbp | me | tvl2 | at-me | odt-no-d
    std::string budget_path;      // optional; supplies eps
    std::string truth_path;       // optional; enables RSNR in trace/summary
    double eps = 0.0;             // used when no budget file is given
    int n0 = 256;
    double n_r = 1.0;
    double threshold = 1e-5;
    long max_iter = 500000;
    double c_balance = 1000.0;
    bool adaptive = true;
    double eps_rec = 1e-10;
    double kappa = 2.0;
    std::string label;  // free-form tag echoed in the summary line
};

/// Writes recon_{method}{label}.odti plus a trace CSV and prints a summary
/// line. Returns the image path.
std::string cmd_reconstruct(const ReconstructOptions& opt, const CommonOptions& common,
                            std::ostream& log);

struct EvaluateOptions {
    std::string truth_path;
    std::string estimate_path;
    bool mean_removed = false;
};

/// Prints and returns the RSNR in dB.
double cmd_evaluate(const EvaluateOptions& opt, std::ostream& log);

struct CalibrateOptions {
    std::string sinogram_path;
};

/// Writes the center-calibrated sinogram next to the input (suffix
/// _calibrated.odts) under the output directory. Returns the output path.
std::string cmd_calibrate(const CalibrateOptions& opt, const CommonOptions& common,
                          std::ostream& log);

/// Runs the full (method, n_theta, msnr) grid of the config and writes
/// sweep.csv with columns method,n_theta,msnr_db,seed,rsnr_db,iterations,
/// wall_time_s, rows sorted by (method, n_theta, msnr). Returns the CSV path.
std::string cmd_sweep(const ExperimentConfig& config, const CommonOptions& common,
                      std::ostream& log);

}  // namespace odt::cli
