#include "odt/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace odt {

NoiseBudget NoiseBudget::from_components(double obs, double model, double nfft, double sigma,
                                         double c) {
    if (obs < 0.0 || model < 0.0 || nfft < 0.0 || sigma < 0.0 || !(c > 0.0))
        throw std::invalid_argument("NoiseBudget: components must be nonnegative, c positive");
    NoiseBudget b;
    b.eps_obs = obs;
    b.eps_model = model;
    b.eps_nfft = nfft;
    b.eps_total = std::sqrt(obs * obs + model * model + nfft * nfft);
    b.sigma_z = sigma;
    b.chernoff_c = c;
    return b;
}

double NoiseBudget::implied_msnr_db(double y_norm) const {
    if (eps_total <= 0.0) return 300.0;
    return 20.0 * std::log10(y_norm / eps_total);
}

double GaussianSampler::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // 53-bit mantissa in (0, 1]; avoids log(0) in Box-Muller.
    const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
}

std::pair<Sinogram, double> add_awgn(const Sinogram& sinogram, double msnr_db,
                                     std::uint64_t seed) {
    if (std::isinf(msnr_db) && msnr_db > 0.0) return {sinogram, 0.0};
    const double signal_norm = sinogram.values.norm();
    if (signal_norm == 0.0)
        throw std::invalid_argument("add_awgn: zero sinogram with finite MSNR");
    const int m = static_cast<int>(sinogram.values.size());
    const double sigma = signal_norm * std::pow(10.0, -msnr_db / 20.0) / std::sqrt(double(m));

    GaussianSampler rng(seed);
    Sinogram out = sinogram;
    for (int i = 0; i < m; ++i) out.values[i] += sigma * rng.next();
    return {out, sigma};
}

double estimate_sigma(const Sinogram& sinogram) {
    const int T = sinogram.grid.n_tau;
    if (T < 4) throw std::invalid_argument("estimate_sigma: needs n_tau >= 4");
    std::vector<double> detail;
    detail.reserve(sinogram.values.size() / 2);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int t = 0; t < sinogram.grid.n_theta; ++t)
        for (int p = 0; p + 1 < T; p += 2) {
            const double d =
                (sinogram.values[t * T + p + 1] - sinogram.values[t * T + p]) * inv_sqrt2;
            detail.push_back(std::abs(d));
        }
    const size_t mid = detail.size() / 2;
    std::nth_element(detail.begin(), detail.begin() + mid, detail.end());
    double med = detail[mid];
    if (detail.size() % 2 == 0) {
        std::nth_element(detail.begin(), detail.begin() + mid - 1, detail.begin() + mid);
        med = 0.5 * (med + detail[mid - 1]);
    }
    return med / 0.6745;
}

NoiseBudget build_budget(const FdmVector& y, double sigma_z, double model_snr_db, double nfft_eps,
                         double image_bound_l1, const CartesianGrid& cart, double n_r,
                         double chernoff_c) {
    if (sigma_z < 0.0 || nfft_eps < 0.0 || image_bound_l1 < 0.0)
        throw std::invalid_argument("build_budget: negative inputs");
    if (!(chernoff_c > 0.0)) throw std::invalid_argument("build_budget: c must be positive");
    const double m = static_cast<double>(y.grid.size());
    const double tail = m + chernoff_c * std::sqrt(m);

    const double sigma_obs = y.grid.delta_tau * std::sqrt(double(y.grid.n_tau)) * sigma_z;
    const double eps_obs = sigma_obs * std::sqrt(tail);

    double eps_model = 0.0;
    if (!(std::isinf(model_snr_db) && model_snr_db > 0.0)) {
        if (model_snr_db < 0.0) throw std::invalid_argument("build_budget: negative model SNR");
        eps_model = y.values.norm() / std::pow(10.0, model_snr_db / 20.0);
    }

    const double eps_nfft = kPi * cart.delta_r / (std::sqrt(3.0) * n_r) * nfft_eps * 4.0 *
                            image_bound_l1 * std::sqrt(tail);

    return NoiseBudget::from_components(eps_obs, eps_model, eps_nfft, sigma_z, chernoff_c);
}

}  // namespace odt
