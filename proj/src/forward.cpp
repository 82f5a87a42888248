#include <fftw3.h>

#include <cmath>
#include <complex>
#include <functional>
#include <thread>
#include <vector>

#include "odt/forward.hpp"

namespace odt {

namespace {

using Complex = std::complex<double>;

void parallel_angles(int count, const std::function<void(int)>& body) {
    const int threads = std::min<int>(count, std::max(1u, std::thread::hardware_concurrency()));
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += threads) body(i);
        });
    for (auto& th : pool) th.join();
}

// Centered DFT along tau of one angle slice:
//   out[s'] = sum_{s in [-T/2,T/2)} in[s] e^{-2 pi i s s' / T},
// realized as (-1)^{s'} FFT(in shifted to [0,T)).
struct RadialDft {
    int n_tau;
    std::vector<Complex> buf_in, buf_out;
    fftw_plan plan;

    explicit RadialDft(int t, int sign) : n_tau(t), buf_in(t), buf_out(t) {
        plan = fftw_plan_dft_1d(t, reinterpret_cast<fftw_complex*>(buf_in.data()),
                                reinterpret_cast<fftw_complex*>(buf_out.data()), sign,
                                FFTW_ESTIMATE);
    }
    ~RadialDft() { fftw_destroy_plan(plan); }
    RadialDft(const RadialDft&) = delete;
    RadialDft& operator=(const RadialDft&) = delete;
};

}  // namespace

ComplexVector radial_dft_full(const Sinogram& sinogram) {
    const int T = sinogram.grid.n_tau;
    const int n_theta = sinogram.grid.n_theta;
    const double d_tau = sinogram.grid.delta_tau;

    RadialDft dft(T, FFTW_FORWARD);
    ComplexVector out(sinogram.grid.size());
    for (int t = 0; t < n_theta; ++t) {
        for (int p = 0; p < T; ++p) dft.buf_in[p] = sinogram.values[t * T + p];
        fftw_execute(dft.plan);
        for (int sp = -T / 2; sp < T / 2; ++sp) {
            const double sign = (sp & 1) ? -1.0 : 1.0;
            out[t * T + sp + T / 2] = d_tau * sign * dft.buf_out[((sp % T) + T) % T];
        }
    }
    return out;
}

FdmVector radial_dft(const Sinogram& sinogram) {
    const int T = sinogram.grid.n_tau;
    const int n_theta = sinogram.grid.n_theta;
    const double d_tau = sinogram.grid.delta_tau;
    const auto freq = FrequencyPolarGrid::from_polar(sinogram.grid);

    RadialDft dft(T, FFTW_FORWARD);
    Vector out(freq.size());
    const int half = T / 2;
    for (int t = 0; t < n_theta; ++t) {
        for (int p = 0; p < T; ++p) dft.buf_in[p] = sinogram.values[t * T + p];
        fftw_execute(dft.plan);
        for (int sp = 0; sp < half; ++sp) {
            const double sign = (sp & 1) ? -1.0 : 1.0;
            const Complex v = d_tau * sign * dft.buf_out[sp];
            out[t * half + sp] = v.real();
            out[freq.half_size() + t * half + sp] = v.imag();
        }
    }
    return {freq, std::move(out)};
}

Sinogram fdm_to_sinogram(const FdmVector& fdm) {
    const int T = fdm.grid.n_tau;
    const int n_theta = fdm.grid.n_theta;
    const ComplexVector full = theta_unpack(fdm);
    const double d_omega = fdm.grid.delta_omega();
    const PolarGrid polar = fdm.grid.to_polar();

    RadialDft dft(T, FFTW_BACKWARD);
    Vector out(polar.size());
    for (int t = 0; t < n_theta; ++t) {
        for (int p = 0; p < T; ++p) dft.buf_in[p] = full[t * T + p];
        fftw_execute(dft.plan);
        for (int s = -T / 2; s < T / 2; ++s) {
            const double sign = (s & 1) ? -1.0 : 1.0;
            out[t * T + s + T / 2] = d_omega * sign * dft.buf_out[((s % T) + T) % T].real();
        }
    }
    return {polar, std::move(out)};
}

FdmVector theta_pack(const ComplexVector& spectrum, const FrequencyPolarGrid& freq) {
    if (spectrum.size() != freq.size())
        throw std::invalid_argument("theta_pack: spectrum length mismatch");
    const int T = freq.n_tau, half = T / 2, half_size = freq.half_size();
    Vector out(freq.size());
    for (int t = 0; t < freq.n_theta; ++t)
        for (int sp = 0; sp < half; ++sp) {
            const Complex v = spectrum[t * T + sp + half];
            out[t * half + sp] = v.real();
            out[half_size + t * half + sp] = v.imag();
        }
    return {freq, std::move(out)};
}

ComplexVector theta_unpack(const FdmVector& fdm) {
    const auto& freq = fdm.grid;
    const int T = freq.n_tau, half = T / 2, half_size = freq.half_size();
    ComplexVector full = ComplexVector::Zero(freq.size());
    for (int t = 0; t < freq.n_theta; ++t) {
        for (int sp = 0; sp < half; ++sp) {
            const Complex v(fdm.values[t * half + sp], fdm.values[half_size + t * half + sp]);
            full[t * T + sp + half] = v;
            if (sp > 0) full[t * T + half - sp] = std::conj(v);
        }
        // The s' = -T/2 node has no mirror on the half grid and stays zero.
    }
    return full;
}

ComplexVector apply_d(const ComplexVector& spectrum, const FrequencyPolarGrid& freq,
                      double delta_r, double n_r) {
    if (spectrum.size() != freq.size())
        throw std::invalid_argument("apply_d: spectrum length mismatch");
    const double c = 2.0 * kPi * delta_r * delta_r / n_r;
    ComplexVector out(spectrum.size());
    for (int i = 0; i < spectrum.size(); ++i) {
        const auto [sp, t] = freq.coords(static_cast<int>(i));
        out[i] = Complex(0.0, c * freq.omega(sp)) * spectrum[i];
    }
    return out;
}

FdmVector remove_d(const FdmVector& fdm, double delta_r, double n_r) {
    const auto& freq = fdm.grid;
    ComplexVector full = theta_unpack(fdm);
    const double c = 2.0 * kPi * delta_r * delta_r / n_r;
    for (int i = 0; i < full.size(); ++i) {
        const auto [sp, t] = freq.coords(static_cast<int>(i));
        if (sp == 0)
            full[i] = 0.0;
        else
            full[i] /= Complex(0.0, c * freq.omega(sp));
    }
    return theta_pack(full, freq);
}

namespace {

// Per-angle phase tables for the exact NDFT: e^{-2 pi i x m} over one axis.
void phase_table(double x, int n0, Complex* out) {
    const int half = n0 / 2;
    for (int m = -half; m < half; ++m) out[m + half] = std::polar(1.0, -2.0 * kPi * x * m);
}

}  // namespace

ComplexVector ndft_exact(const RimImage& image, const FrequencyPolarGrid& freq) {
    const int n0 = image.grid.n0, half = n0 / 2;
    const int T = freq.n_tau;
    const double alpha = freq.delta_omega() * image.grid.delta_r;
    ComplexVector out(freq.size());
    parallel_angles(freq.n_theta, [&](int t) {
        const auto [p1, p2] = freq.direction(t);
        std::vector<Complex> e1(n0), e2(n0);
        for (int sp = -T / 2; sp < T / 2; ++sp) {
            phase_table(sp * alpha * p1, n0, e1.data());
            phase_table(sp * alpha * p2, n0, e2.data());
            Complex acc(0.0, 0.0);
            for (int n = -half; n < half; ++n) {
                const double* row = image.values.data() + (n + half) * n0;
                Complex inner(0.0, 0.0);
                for (int m = 0; m < n0; ++m) inner += row[m] * e1[m];
                acc += e2[n + half] * inner;
            }
            out[t * T + sp + T / 2] = acc;
        }
    });
    return out;
}

ComplexVector ndft_adjoint_exact(const ComplexVector& spectrum, const FrequencyPolarGrid& freq,
                                 const CartesianGrid& cart) {
    if (spectrum.size() != freq.size())
        throw std::invalid_argument("ndft_adjoint_exact: spectrum length mismatch");
    const int n0 = cart.n0, half = n0 / 2;
    const int T = freq.n_tau;
    const double alpha = freq.delta_omega() * cart.delta_r;
    const int threads =
        std::min<int>(freq.n_theta, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<ComplexVector> partials(threads, ComplexVector::Zero(cart.size()));

    parallel_angles(threads, [&](int w) {
        ComplexVector& acc = partials[w];
        std::vector<Complex> e1(n0), e2(n0);
        for (int t = w; t < freq.n_theta; t += threads) {
            const auto [p1, p2] = freq.direction(t);
            for (int sp = -T / 2; sp < T / 2; ++sp) {
                const Complex v = spectrum[t * T + sp + T / 2];
                if (v == Complex(0.0, 0.0)) continue;
                phase_table(sp * alpha * p1, n0, e1.data());
                phase_table(sp * alpha * p2, n0, e2.data());
                for (int n = -half; n < half; ++n) {
                    const Complex c2 = v * std::conj(e2[n + half]);
                    Complex* row = acc.data() + (n + half) * n0;
                    for (int m = 0; m < n0; ++m) row[m] += c2 * std::conj(e1[m]);
                }
            }
        }
    });

    ComplexVector out = ComplexVector::Zero(cart.size());
    for (const auto& p : partials) out += p;
    return out;
}

namespace {

// Half-grid exact evaluation used by the exact operator mode.
ComplexVector ndft_exact_half(const Vector& image, const CartesianGrid& cart,
                              const FrequencyPolarGrid& freq) {
    const int n0 = cart.n0, half = n0 / 2;
    const int hs = freq.n_tau / 2;
    const double alpha = freq.delta_omega() * cart.delta_r;
    ComplexVector out(freq.half_size());
    parallel_angles(freq.n_theta, [&](int t) {
        const auto [p1, p2] = freq.direction(t);
        std::vector<Complex> e1(n0), e2(n0);
        for (int sp = 0; sp < hs; ++sp) {
            phase_table(sp * alpha * p1, n0, e1.data());
            phase_table(sp * alpha * p2, n0, e2.data());
            Complex acc(0.0, 0.0);
            for (int n = -half; n < half; ++n) {
                const double* row = image.data() + (n + half) * n0;
                Complex inner(0.0, 0.0);
                for (int m = 0; m < n0; ++m) inner += row[m] * e1[m];
                acc += e2[n + half] * inner;
            }
            out[t * hs + sp] = acc;
        }
    });
    return out;
}

Vector ndft_adjoint_exact_half(const ComplexVector& data, const CartesianGrid& cart,
                               const FrequencyPolarGrid& freq) {
    const int n0 = cart.n0, half = n0 / 2;
    const int hs = freq.n_tau / 2;
    const double alpha = freq.delta_omega() * cart.delta_r;
    const int threads =
        std::min<int>(freq.n_theta, std::max(1u, std::thread::hardware_concurrency()));
    std::vector<Vector> partials(threads, Vector::Zero(cart.size()));

    parallel_angles(threads, [&](int w) {
        Vector& acc = partials[w];
        std::vector<Complex> e1(n0), e2(n0);
        for (int t = w; t < freq.n_theta; t += threads) {
            const auto [p1, p2] = freq.direction(t);
            for (int sp = 0; sp < hs; ++sp) {
                const Complex v = data[t * hs + sp];
                if (v == Complex(0.0, 0.0)) continue;
                phase_table(sp * alpha * p1, n0, e1.data());
                phase_table(sp * alpha * p2, n0, e2.data());
                for (int n = -half; n < half; ++n) {
                    const Complex c2 = v * std::conj(e2[n + half]);
                    double* row = acc.data() + (n + half) * n0;
                    for (int m = 0; m < n0; ++m)
                        row[m] += (c2 * std::conj(e1[m])).real();
                }
            }
        }
    });

    Vector out = Vector::Zero(cart.size());
    for (const auto& p : partials) out += p;
    return out;
}

}  // namespace

ForwardOperator::ForwardOperator(const CartesianGrid& cart, const FrequencyPolarGrid& freq,
                                 double n_r, NdftMode mode, double epsilon, double kappa,
                                 bool include_d)
    : cart_(cart), freq_(freq), n_r_(n_r), mode_(mode), epsilon_(epsilon), kappa_(kappa),
      include_d_(include_d) {
    if (!(n_r > 0.0)) throw std::invalid_argument("ForwardOperator: n_r must be positive");
    if (mode_ == NdftMode::nfft) nfft_ = std::make_shared<Nfft>(cart_, freq_, epsilon_, kappa_);
}

Vector ForwardOperator::apply(const Vector& image) const {
    if (image.size() != cart_.size())
        throw std::invalid_argument("ForwardOperator::apply: image size mismatch");
    ComplexVector half = mode_ == NdftMode::nfft ? nfft_->forward_half(image)
                                                 : ndft_exact_half(image, cart_, freq_);
    if (include_d_) {
        const double c = 2.0 * kPi * cart_.delta_r * cart_.delta_r / n_r_;
        const int hs = freq_.n_tau / 2;
        for (int i = 0; i < half.size(); ++i)
            half[i] *= Complex(0.0, c * freq_.omega(static_cast<int>(i) % hs));
    }
    const int half_size = freq_.half_size();
    Vector out(freq_.size());
    for (int i = 0; i < half_size; ++i) {
        out[i] = half[i].real();
        out[half_size + i] = half[i].imag();
    }
    return out;
}

Vector ForwardOperator::adjoint(const Vector& fdm) const {
    if (fdm.size() != freq_.size())
        throw std::invalid_argument("ForwardOperator::adjoint: data size mismatch");
    const int half_size = freq_.half_size();
    ComplexVector half(half_size);
    for (int i = 0; i < half_size; ++i) half[i] = Complex(fdm[i], fdm[half_size + i]);
    if (include_d_) {
        const double c = 2.0 * kPi * cart_.delta_r * cart_.delta_r / n_r_;
        const int hs = freq_.n_tau / 2;
        for (int i = 0; i < half.size(); ++i)
            half[i] *= Complex(0.0, -c * freq_.omega(static_cast<int>(i) % hs));
    }
    return mode_ == NdftMode::nfft ? nfft_->adjoint_half(half)
                                   : ndft_adjoint_exact_half(half, cart_, freq_);
}

FdmVector ForwardOperator::apply(const RimImage& image) const {
    return {freq_, apply(image.values)};
}

RimImage ForwardOperator::adjoint(const FdmVector& fdm) const {
    return {cart_, adjoint(fdm.values)};
}

Sinogram fold_full_circle(const Vector& values, int n_tau, int n_theta_full, double delta_tau) {
    if (n_theta_full < 1) throw std::invalid_argument("fold_full_circle: n_theta_full < 1");
    if (values.size() != static_cast<Eigen::Index>(n_tau) * n_theta_full)
        throw std::invalid_argument("fold_full_circle: value length mismatch");
    const int T = n_tau;

    auto mirrored = [&](int t_in, int s) -> double {
        // -Delta(-tau_s, theta) evaluated on the input slice t_in.
        if (-s >= T / 2) return 0.0;  // s = -T/2 has no mirrored ray
        return -values[t_in * T + (-s) + T / 2];
    };

    if (n_theta_full % 2 == 1) {
        const PolarGrid out_grid = PolarGrid::create(T, n_theta_full, delta_tau);
        Sinogram out = Sinogram::zero(out_grid);
        for (int t_out = 0; t_out < n_theta_full; ++t_out) {
            if (t_out % 2 == 0) {
                const int t_in = t_out / 2;
                for (int s = -T / 2; s < T / 2; ++s)
                    out(s, t_out) = values[t_in * T + s + T / 2];
            } else {
                const int t_in = (t_out + n_theta_full) / 2;
                for (int s = -T / 2; s < T / 2; ++s) out(s, t_out) = mirrored(t_in, s);
            }
        }
        return out;
    }

    const int n_half = n_theta_full / 2;
    const PolarGrid out_grid = PolarGrid::create(T, n_half, delta_tau);
    Sinogram out = Sinogram::zero(out_grid);
    for (int t = 0; t < n_half; ++t) {
        for (int s = -T / 2; s < T / 2; ++s) {
            const double direct = values[t * T + s + T / 2];
            if (-s >= T / 2)
                out(s, t) = direct;
            else
                out(s, t) = 0.5 * (direct + mirrored(t + n_half, s));
        }
    }
    return out;
}

}  // namespace odt
