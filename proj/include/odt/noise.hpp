#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include "odt/image.hpp"

namespace odt {

/// Fidelity radius decomposition eps^2 = eps_obs^2 + eps_model^2 + eps_nfft^2.
struct NoiseBudget {
    double eps_obs = 0.0;
    double eps_model = 0.0;
    double eps_nfft = 0.0;
    double eps_total = 0.0;
    double sigma_z = 0.0;
    double chernoff_c = 2.0;

    static NoiseBudget from_components(double obs, double model, double nfft, double sigma = 0.0,
                                       double c = 2.0);

    /// MSNR implied by treating eps_total as the noise norm on data of norm
    /// ||y||: 20 log10(||y|| / eps_total).
    double implied_msnr_db(double y_norm) const;
};

/// Deterministic Gaussian noise injection at a prescribed measurement SNR.
/// sigma is chosen as ||Delta|| 10^{-msnr/20} / sqrt(M); msnr_db = +inf leaves
/// the sinogram untouched. Returns the noisy sinogram and the sigma used.
std::pair<Sinogram, double> add_awgn(const Sinogram& sinogram, double msnr_db, std::uint64_t seed);

/// Robust median estimate of the per-sample noise level: one-level Haar
/// high-pass along tau per angle, pooled, MAD / 0.6745.
double estimate_sigma(const Sinogram& sinogram);

/// Assemble the three-term budget:
///   eps_obs^2   = sigma_obs^2 (M + c sqrt(M)),  sigma_obs^2 = delta_tau^2 n_tau sigma_z^2
///   eps_model   = ||y|| / 10^{model_snr_db/20}   (0 when model_snr_db = +inf)
///   eps_nfft    = (pi delta_r / (sqrt3 n_r)) nfft_eps 4 image_bound_l1 (M + c sqrt(M))^{1/2}
NoiseBudget build_budget(const FdmVector& y, double sigma_z, double model_snr_db, double nfft_eps,
                         double image_bound_l1, const CartesianGrid& cart, double n_r,
                         double chernoff_c = 2.0);

/// Portable deterministic N(0,1) stream: mt19937_64 + Box-Muller. The
/// standard library normal_distribution is implementation-defined, so noise
/// realizations go through this sampler to keep seeded runs bit-identical.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}
    double next();

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace odt
