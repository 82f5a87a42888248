#pragma once

#include <string>

#include "odt/image.hpp"
#include "odt/metrics.hpp"
#include "odt/noise.hpp"

namespace odt {

// Binary formats, little-endian:
//   ODTI: magic "ODTI", u16 version, u32 n0, f64 delta_r, n0*n0 f64 values
//   ODTS: magic "ODTS", u32 n_tau, u32 n_theta, f64 delta_tau, M f64 values
//   ODTF: magic "ODTF", u32 n_tau, u32 n_theta, f64 delta_tau, M f64 values
// Values appear in canonical vectorization order and round-trip bit-exactly.

void write_image(const std::string& path, const RimImage& image);
RimImage read_image(const std::string& path);

/// 16-bit min-max scaled PGM preview of an image.
void write_pgm_preview(const std::string& path, const RimImage& image);

void write_sinogram(const std::string& path, const Sinogram& sinogram);
Sinogram read_sinogram(const std::string& path);

void write_fdm(const std::string& path, const FdmVector& fdm);
FdmVector read_fdm(const std::string& path);

/// Budget as `key = value` text (eps_obs, eps_model, eps_nfft, eps_total,
/// sigma_z, chernoff_c).
void write_budget(const std::string& path, const NoiseBudget& budget);
NoiseBudget read_budget(const std::string& path);

/// CSV with header iter,p_res,d_res,rel_change,mu,nu,rho,rsnr_db. rsnr_db is
/// empty when no ground truth was supplied.
void write_trace(const std::string& path, const std::vector<TraceRecord>& trace);

bool file_exists(const std::string& path);

}  // namespace odt
