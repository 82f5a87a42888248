#pragma once

#include <complex>
#include <memory>

#include "odt/image.hpp"

namespace odt {

/// Deflection of a single straight ray r.p_theta = tau through the image,
/// per the continuous model: line integral of the transverse gradient of the
/// interpolated map, divided by n_r.
double simulate_deflection_at(const RimImage& image, double tau, double theta, double n_r);

/// Continuous-model deflection simulation on a full polar grid. Serves as the
/// measurement-path oracle that is independent of the Fourier operator chain.
Sinogram simulate_deflections(const RimImage& image, const PolarGrid& polar, double n_r);

/// Radial DFT of a sinogram with Riemann scaling, packed on the half grid:
/// y_{k(s',t)} = delta_tau * sum_s Delta(tau_s,theta_t) e^{-2 pi i tau_s omega_s'}.
FdmVector radial_dft(const Sinogram& sinogram);

/// Same transform kept complex on the full signed frequency grid.
ComplexVector radial_dft_full(const Sinogram& sinogram);

/// Inverse of radial_dft on the half-grid-representable subspace. The
/// unmirrored radial Nyquist slot is not recoverable from an FdmVector and is
/// treated as zero.
Sinogram fdm_to_sinogram(const FdmVector& fdm);

/// Exact polar NDFT of a real image on every node of the full frequency grid,
/// F_{ij} = e^{-2 pi i k_i . r_j}. O(M N0) per angle slice; oracle use only.
ComplexVector ndft_exact(const RimImage& image, const FrequencyPolarGrid& freq);

/// Exact adjoint of ndft_exact: u_j = sum_i v_i e^{+2 pi i k_i . r_j}.
ComplexVector ndft_adjoint_exact(const ComplexVector& spectrum, const FrequencyPolarGrid& freq,
                                 const CartesianGrid& cart);

/// Elementwise multiplication by D = 2 pi i (delta_r)^2 omega_(j) / n_r on a
/// full-grid complex spectrum. Entries at omega = 0 become exactly zero.
ComplexVector apply_d(const ComplexVector& spectrum, const FrequencyPolarGrid& freq,
                      double delta_r, double n_r);

/// Restriction to the half grid followed by [real; imag] stacking.
FdmVector theta_pack(const ComplexVector& spectrum, const FrequencyPolarGrid& freq);

/// Rebuilds the full grid from packed data, imposing the Hermitian symmetry
/// y(-omega,theta) = conj(y(omega,theta)). Inverse of theta_pack on
/// Hermitian-symmetric inputs; the unmirrored radial Nyquist slot is zeroed.
ComplexVector theta_unpack(const FdmVector& fdm);

/// Gaussian-bell NFFT evaluating the polar NDFT of Cartesian images with
/// max-norm error at most 4 ||f||_1 epsilon.
///
/// The oversampled grid has kappa*n0 points per axis; the window cut-off is
/// derived from epsilon through the Gaussian-window decay rate
/// exp(-m pi (1 - 1/(2 kappa - 1))).
class Nfft {
public:
    Nfft(const CartesianGrid& cart, const FrequencyPolarGrid& freq, double epsilon,
         double kappa = 2.0);
    ~Nfft();
    Nfft(const Nfft&) = delete;
    Nfft& operator=(const Nfft&) = delete;

    /// Values at all M nodes of the full frequency grid.
    ComplexVector forward_full(const Vector& image) const;
    /// Values at the M/2 half-grid nodes in canonical half order.
    ComplexVector forward_half(const Vector& image) const;
    /// Real part of F_half^* applied to half-grid data; exact transpose of
    /// forward_half up to rounding, independent of epsilon.
    Vector adjoint_half(const ComplexVector& half_spectrum) const;

    double epsilon() const;
    double kappa() const;
    int cutoff() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

enum class NdftMode { exact, nfft };

/// The composed linear measurement map Phi = Theta D F (ODT) or Theta F (AT)
/// acting between vectorized images and packed FDM vectors, with its exact
/// adjoint. The frequency evaluation runs either through the exact NDFT or
/// the Gaussian-window NFFT.
class ForwardOperator {
public:
    ForwardOperator(const CartesianGrid& cart, const FrequencyPolarGrid& freq, double n_r,
                    NdftMode mode = NdftMode::nfft, double epsilon = 1e-10, double kappa = 2.0,
                    bool include_d = true);

    const CartesianGrid& cart() const { return cart_; }
    const FrequencyPolarGrid& freq() const { return freq_; }
    double n_r() const { return n_r_; }
    NdftMode mode() const { return mode_; }
    double epsilon() const { return epsilon_; }
    bool include_d() const { return include_d_; }

    int image_size() const { return cart_.size(); }
    int data_size() const { return freq_.size(); }

    Vector apply(const Vector& image) const;
    Vector adjoint(const Vector& fdm) const;

    FdmVector apply(const RimImage& image) const;
    RimImage adjoint(const FdmVector& fdm) const;

private:
    CartesianGrid cart_;
    FrequencyPolarGrid freq_;
    double n_r_;
    NdftMode mode_;
    double epsilon_;
    double kappa_;
    bool include_d_;
    std::shared_ptr<Nfft> nfft_;
};

/// Divide packed measurements by the diagonal D on nonzero frequencies and
/// zero the omega = 0 nodes; turns an ODT FDM into the AT-shaped data of the
/// plain tomographic transform.
FdmVector remove_d(const FdmVector& fdm, double delta_r, double n_r);

/// Fold a sinogram measured over [0, 2pi) onto [0, pi) using the symmetry
/// Delta(tau, theta+pi) = -Delta(-tau, theta). `values` is angle-major over
/// n_theta_full slots of spacing 2pi/n_theta_full. For odd n_theta_full the
/// folded angles interleave to n_theta_full slots of spacing pi/n_theta_full;
/// for even counts opposite pairs are averaged into n_theta_full/2 slots.
Sinogram fold_full_circle(const Vector& values, int n_tau, int n_theta_full, double delta_tau);

}  // namespace odt
