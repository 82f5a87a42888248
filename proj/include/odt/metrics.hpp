#pragma once

#include <optional>
#include <vector>

#include "odt/image.hpp"

namespace odt {

/// Numerically-exact results are capped at this value so CSV output stays
/// finite.
inline constexpr double kSnrCapDb = 300.0;

/// Reconstruction SNR, 20 log10(||n|| / ||n - est||). With mean_removed the
/// estimate mean is replaced by the truth mean before scoring.
double rsnr_db(const RimImage& truth, const RimImage& estimate, bool mean_removed = false);

/// Measurement SNR, 20 log10(||Delta|| / ||eta||) with eta = noisy - clean.
double msnr_db(const Sinogram& clean, const Sinogram& noisy);

/// One solver iteration worth of diagnostics.
struct TraceRecord {
    int iter = 0;
    double p_res_l1 = 0.0;
    double d_res_l1 = 0.0;
    double rel_change = 0.0;
    double mu = 0.0;
    double nu = 0.0;
    double rho = 0.0;
    std::optional<double> rsnr_db;
};

/// Per-iteration series ||P||_1^2 + ||D||_1^2.
std::vector<double> residual_energy(const std::vector<TraceRecord>& trace);

}  // namespace odt
