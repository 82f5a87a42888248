#include "odt/metrics.hpp"

#include <cmath>

namespace odt {

double rsnr_db(const RimImage& truth, const RimImage& estimate, bool mean_removed) {
    if (truth.grid.n0 != estimate.grid.n0)
        throw std::invalid_argument("rsnr_db: grid mismatch");
    const double truth_norm = truth.values.norm();
    if (truth_norm == 0.0) throw std::invalid_argument("rsnr_db: zero ground truth");
    Vector err;
    if (mean_removed) {
        const double shift = truth.values.mean() - estimate.values.mean();
        err = truth.values - (estimate.values.array() + shift).matrix();
    } else {
        err = truth.values - estimate.values;
    }
    const double err_norm = err.norm();
    if (err_norm == 0.0) return kSnrCapDb;
    return std::min(kSnrCapDb, 20.0 * std::log10(truth_norm / err_norm));
}

double msnr_db(const Sinogram& clean, const Sinogram& noisy) {
    if (clean.grid.n_tau != noisy.grid.n_tau || clean.grid.n_theta != noisy.grid.n_theta)
        throw std::invalid_argument("msnr_db: grid mismatch");
    const double signal = clean.values.norm();
    if (signal == 0.0) throw std::invalid_argument("msnr_db: zero clean signal");
    const double eta = (noisy.values - clean.values).norm();
    if (eta == 0.0) return kSnrCapDb;
    return std::min(kSnrCapDb, 20.0 * std::log10(signal / eta));
}

std::vector<double> residual_energy(const std::vector<TraceRecord>& trace) {
    if (trace.empty()) throw std::invalid_argument("residual_energy: empty trace");
    std::vector<double> out;
    out.reserve(trace.size());
    for (const auto& r : trace)
        out.push_back(r.p_res_l1 * r.p_res_l1 + r.d_res_l1 * r.d_res_l1);
    return out;
}

}  // namespace odt
