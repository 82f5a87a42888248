#include <fftw3.h>

#include <cmath>
#include <complex>
#include <vector>

#include "odt/forward.hpp"

namespace odt {

namespace {

// Window cut-off giving the Gaussian-bell decay e^{-m pi (1 - 1/(2k-1))}
// below the requested epsilon, with one extra tap of margin.
int cutoff_for(double epsilon, double kappa) {
    const double rate = kPi * (1.0 - 1.0 / (2.0 * kappa - 1.0));
    return std::max(2, static_cast<int>(std::ceil(std::log(1.0 / epsilon) / rate)) + 1);
}

struct NodeCache {
    std::vector<int> base1, base2;  // leftmost tap index per axis (centered coords)
    std::vector<double> w1, w2;     // per-node tap weights, 2m each
};

}  // namespace

struct Nfft::Impl {
    CartesianGrid cart;
    FrequencyPolarGrid freq;
    double epsilon;
    double kappa;
    int m;     // taps per side
    double b;  // Gaussian shape parameter
    int n;     // oversampled grid side

    std::vector<double> deconv;  // e^{+b (pi k / n)^2} for k in I_{N0}
    mutable std::vector<std::complex<double>> work;
    fftw_plan plan_bw = nullptr;

    mutable NodeCache full_cache, half_cache;
    mutable bool full_ready = false, half_ready = false;

    Impl(const CartesianGrid& c, const FrequencyPolarGrid& f, double eps, double kap)
        : cart(c), freq(f), epsilon(eps), kappa(kap) {
        if (!(eps > 0.0 && eps < 1.0))
            throw std::invalid_argument("Nfft: epsilon must lie in (0, 1)");
        if (!(kap > 1.0)) throw std::invalid_argument("Nfft: kappa must exceed 1");
        m = cutoff_for(eps, kap);
        n = static_cast<int>(std::ceil(kap * cart.n0));
        if (n % 2 != 0) ++n;
        b = (2.0 * kap / (2.0 * kap - 1.0)) * m / kPi;

        deconv.resize(cart.n0);
        for (int k = -cart.n0 / 2; k < cart.n0 / 2; ++k) {
            const double arg = kPi * k / n;
            deconv[k + cart.n0 / 2] = std::exp(b * arg * arg);
        }
        work.resize(static_cast<size_t>(n) * n);
        plan_bw = fftw_plan_dft_2d(n, n, reinterpret_cast<fftw_complex*>(work.data()),
                                   reinterpret_cast<fftw_complex*>(work.data()), FFTW_BACKWARD,
                                   FFTW_ESTIMATE);
    }

    ~Impl() {
        if (plan_bw) fftw_destroy_plan(plan_bw);
    }

    int slot(int centered) const { return ((centered % n) + n) % n; }

    // Tap base and Gaussian weights for one torus coordinate.
    void node_axis(double x, int& base, double* w) const {
        const double wrapped = x - std::floor(x + 0.5);  // [-1/2, 1/2)
        const double q = wrapped * n;
        base = static_cast<int>(std::floor(q)) - m + 1;
        const double inv_b = 1.0 / b;
        const double norm = 1.0 / std::sqrt(kPi * b);
        for (int i = 0; i < 2 * m; ++i) {
            const double d = q - (base + i);
            w[i] = norm * std::exp(-d * d * inv_b);
        }
    }

    void build_cache(NodeCache& cache, bool half_grid) const {
        const int count = half_grid ? freq.half_size() : freq.size();
        cache.base1.resize(count);
        cache.base2.resize(count);
        cache.w1.resize(static_cast<size_t>(count) * 2 * m);
        cache.w2.resize(static_cast<size_t>(count) * 2 * m);
        const double alpha = freq.delta_omega() * cart.delta_r;
        for (int i = 0; i < count; ++i) {
            const auto [sp, t] = half_grid ? freq.half_coords(i) : freq.coords(i);
            const auto [p1, p2] = freq.direction(t);
            const double x1 = sp * alpha * p1;
            const double x2 = sp * alpha * p2;
            node_axis(x1, cache.base1[i], &cache.w1[static_cast<size_t>(i) * 2 * m]);
            node_axis(x2, cache.base2[i], &cache.w2[static_cast<size_t>(i) * 2 * m]);
        }
    }

    const NodeCache& cache(bool half_grid) const {
        if (half_grid) {
            if (!half_ready) {
                build_cache(half_cache, true);
                half_ready = true;
            }
            return half_cache;
        }
        if (!full_ready) {
            build_cache(full_cache, false);
            full_ready = true;
        }
        return full_cache;
    }

    void embed(const Vector& image) const {
        const int n0 = cart.n0, half = n0 / 2;
        std::fill(work.begin(), work.end(), std::complex<double>(0.0, 0.0));
        for (int k2 = -half; k2 < half; ++k2) {
            const double d2 = deconv[k2 + half];
            const int row = slot(k2) * n;
            const int irow = (k2 + half) * n0;
            for (int k1 = -half; k1 < half; ++k1)
                work[row + slot(k1)] = image[irow + k1 + half] * deconv[k1 + half] * d2;
        }
    }

    ComplexVector gather(bool half_grid) const {
        const NodeCache& nc = cache(half_grid);
        const int count = static_cast<int>(nc.base1.size());
        ComplexVector out(count);
        for (int i = 0; i < count; ++i) {
            const double* w1 = &nc.w1[static_cast<size_t>(i) * 2 * m];
            const double* w2 = &nc.w2[static_cast<size_t>(i) * 2 * m];
            std::complex<double> acc(0.0, 0.0);
            for (int a = 0; a < 2 * m; ++a) {
                const int row = slot(nc.base2[i] + a) * n;
                std::complex<double> inner(0.0, 0.0);
                for (int c = 0; c < 2 * m; ++c) inner += w1[c] * work[row + slot(nc.base1[i] + c)];
                acc += w2[a] * inner;
            }
            out[i] = std::conj(acc);
        }
        return out;
    }

    ComplexVector forward(const Vector& image, bool half_grid) const {
        if (image.size() != cart.size()) throw std::invalid_argument("Nfft: image size mismatch");
        embed(image);
        fftw_execute(plan_bw);
        return gather(half_grid);
    }

    Vector adjoint_half(const ComplexVector& data) const {
        if (data.size() != freq.half_size())
            throw std::invalid_argument("Nfft: half-grid data size mismatch");
        const NodeCache& nc = cache(true);
        std::fill(work.begin(), work.end(), std::complex<double>(0.0, 0.0));
        for (int i = 0; i < data.size(); ++i) {
            const double* w1 = &nc.w1[static_cast<size_t>(i) * 2 * m];
            const double* w2 = &nc.w2[static_cast<size_t>(i) * 2 * m];
            for (int a = 0; a < 2 * m; ++a) {
                const int row = slot(nc.base2[i] + a) * n;
                const std::complex<double> v = data[i] * w2[a];
                for (int c = 0; c < 2 * m; ++c) work[row + slot(nc.base1[i] + c)] += v * w1[c];
            }
        }
        fftw_execute(plan_bw);
        const int n0 = cart.n0, half = n0 / 2;
        Vector out(cart.size());
        for (int k2 = -half; k2 < half; ++k2) {
            const double d2 = deconv[k2 + half];
            const int row = slot(k2) * n;
            const int irow = (k2 + half) * n0;
            for (int k1 = -half; k1 < half; ++k1)
                out[irow + k1 + half] = work[row + slot(k1)].real() * deconv[k1 + half] * d2;
        }
        return out;
    }
};

Nfft::Nfft(const CartesianGrid& cart, const FrequencyPolarGrid& freq, double epsilon, double kappa)
    : impl_(std::make_unique<Impl>(cart, freq, epsilon, kappa)) {}

Nfft::~Nfft() = default;

ComplexVector Nfft::forward_full(const Vector& image) const { return impl_->forward(image, false); }
ComplexVector Nfft::forward_half(const Vector& image) const { return impl_->forward(image, true); }
Vector Nfft::adjoint_half(const ComplexVector& half_spectrum) const {
    return impl_->adjoint_half(half_spectrum);
}
double Nfft::epsilon() const { return impl_->epsilon; }
double Nfft::kappa() const { return impl_->kappa; }
int Nfft::cutoff() const { return impl_->m; }

}  // namespace odt
