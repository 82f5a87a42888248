#include <doctest.h>

#include <cmath>
#include <complex>

#include "odt/forward.hpp"
#include "odt/noise.hpp"
#include "odt/phantoms.hpp"

using namespace odt;

namespace {

Vector random_vector(int n, std::uint64_t seed) {
    GaussianSampler rng(seed);
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.next();
    return v;
}

// Brute-force centered radial DFT, the oracle for radial_dft.
ComplexVector radial_dft_oracle(const Sinogram& s) {
    const int T = s.grid.n_tau;
    ComplexVector out(s.grid.size());
    for (int t = 0; t < s.grid.n_theta; ++t)
        for (int sp = -T / 2; sp < T / 2; ++sp) {
            std::complex<double> acc(0.0, 0.0);
            for (int q = -T / 2; q < T / 2; ++q)
                acc += s.values[s.grid.index(q, t)] *
                       std::polar(1.0, -2.0 * kPi * q * sp / double(T));
            out[t * T + sp + T / 2] = s.grid.delta_tau * acc;
        }
    return out;
}

double rel_err(const Vector& got, const Vector& want) {
    return (got - want).norm() / want.norm();
}

}  // namespace

TEST_CASE("radial dft matches the brute-force sum") {
    const auto polar = PolarGrid::create(8, 2, 0.9);
    const Sinogram s{polar, random_vector(polar.size(), 21)};
    const ComplexVector oracle = radial_dft_oracle(s);
    const ComplexVector full = radial_dft_full(s);
    CHECK((full - oracle).norm() <= 1e-12 * oracle.norm());

    const FdmVector packed = radial_dft(s);
    const FdmVector packed_oracle = theta_pack(oracle, packed.grid);
    CHECK((packed.values - packed_oracle.values).norm() <= 1e-12 * packed_oracle.values.norm());
}

TEST_CASE("radial dft of a zero sinogram is zero") {
    const auto polar = PolarGrid::create(8, 3, 1.0);
    CHECK(radial_dft(Sinogram::zero(polar)).values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("radial dft of a centered impulse is flat") {
    const auto polar = PolarGrid::create(16, 2, 1.0);
    Sinogram s = Sinogram::zero(polar);
    s(0, 1) = 1.0;
    const FdmVector y = radial_dft(s);
    const int hs = polar.n_tau / 2;
    for (int sp = 0; sp < hs; ++sp) {
        CHECK(y.values[y.grid.half_index(sp, 1)] == doctest::Approx(1.0));
        CHECK(y.values[y.grid.half_size() + y.grid.half_index(sp, 1)] ==
              doctest::Approx(0.0));
        CHECK(y.values[y.grid.half_index(sp, 0)] == doctest::Approx(0.0));
    }
}

TEST_CASE("fdm_to_sinogram inverts radial_dft on the packed subspace") {
    const auto freq = FrequencyPolarGrid::create(12, 4, 0.7);
    const FdmVector y{freq, random_vector(freq.size(), 33)};
    const FdmVector again = radial_dft(fdm_to_sinogram(y));
    CHECK((again.values - y.values).norm() <= 1e-12 * y.values.norm());
}

TEST_CASE("theta pack and unpack") {
    const auto freq = FrequencyPolarGrid::create(8, 3, 1.1);

    // Hermitian-symmetric spectrum round-trips exactly.
    const FdmVector packed{freq, random_vector(freq.size(), 44)};
    const ComplexVector full = theta_unpack(packed);
    const FdmVector repacked = theta_pack(full, freq);
    CHECK((repacked.values - packed.values).cwiseAbs().maxCoeff() <= 1e-15);

    for (int t = 0; t < freq.n_theta; ++t)
        for (int sp = 1; sp < freq.n_tau / 2; ++sp)
            CHECK(std::abs(full[freq.index(-sp, t)] - std::conj(full[freq.index(sp, t)])) ==
                  0.0);

    // Real constant spectrum packs with a zero imaginary half.
    const FdmVector constant = theta_pack(ComplexVector::Constant(freq.size(), 2.5), freq);
    CHECK(constant.values.tail(freq.half_size()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(constant.values.head(freq.half_size()).minCoeff() == 2.5);

    // Adjoint relation under the half-grid inner product:
    // <Theta x, v>_R = Re <x|half, Theta* v|half>.
    GaussianSampler rng(55);
    ComplexVector x(freq.size());
    for (int i = 0; i < x.size(); ++i) x[i] = {rng.next(), rng.next()};
    const Vector v = random_vector(freq.size(), 56);
    const FdmVector tx = theta_pack(x, freq);
    const ComplexVector tv = theta_unpack(FdmVector{freq, v});
    const double lhs = tx.values.dot(v);
    double rhs = 0.0;
    for (int t = 0; t < freq.n_theta; ++t)
        for (int sp = 0; sp < freq.n_tau / 2; ++sp) {
            const int i = freq.index(sp, t);
            rhs += (std::conj(x[i]) * tv[i]).real();
        }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

    CHECK_THROWS_AS(theta_pack(ComplexVector::Zero(7), freq), std::invalid_argument);
}

TEST_CASE("exact ndft closed forms") {
    const auto cart = CartesianGrid::create(4, 1.0);
    const auto freq = FrequencyPolarGrid::create(4, 3, 1.0);

    // Constant image at the zero-frequency nodes sums to N*c.
    const RimImage constant{cart, Vector::Constant(cart.size(), 0.3)};
    const ComplexVector spec = ndft_exact(constant, freq);
    for (int t = 0; t < freq.n_theta; ++t)
        CHECK(std::abs(spec[freq.index(0, t)] - std::complex<double>(16 * 0.3, 0.0)) <= 1e-12);

    // Impulse at the origin gives 1 everywhere.
    RimImage impulse = RimImage::zero(cart);
    impulse(0, 0) = 1.0;
    const ComplexVector flat = ndft_exact(impulse, freq);
    for (int i = 0; i < flat.size(); ++i)
        CHECK(std::abs(flat[i] - std::complex<double>(1.0, 0.0)) <= 1e-12);
}

TEST_CASE("exact ndft is Hermitian-symmetric for real images") {
    const auto cart = CartesianGrid::create(8, 0.5);
    const auto freq = FrequencyPolarGrid::create(8, 5, 0.5);
    const RimImage img{cart, random_vector(cart.size(), 66)};
    const ComplexVector spec = ndft_exact(img, freq);
    for (int t = 0; t < freq.n_theta; ++t)
        for (int sp = 1; sp < freq.n_tau / 2; ++sp)
            CHECK(std::abs(spec[freq.index(-sp, t)] - std::conj(spec[freq.index(sp, t)])) <=
                  1e-12 * std::abs(spec[freq.index(sp, t)]) + 1e-13);
}

TEST_CASE("exact ndft adjoint identity and closed forms") {
    const auto cart = CartesianGrid::create(4, 1.0);
    const auto freq = FrequencyPolarGrid::create(4, 2, 1.0);

    CHECK(ndft_adjoint_exact(ComplexVector::Zero(freq.size()), freq, cart)
              .cwiseAbs()
              .maxCoeff() == 0.0);

    // Single unit node: image of unit-modulus phases e^{+2 pi i k r}.
    ComplexVector e = ComplexVector::Zero(freq.size());
    const int node = freq.index(1, 1);
    e[node] = 1.0;
    const ComplexVector img = ndft_adjoint_exact(e, freq, cart);
    const auto [p1, p2] = freq.direction(1);
    const double alpha = freq.delta_omega() * cart.delta_r;
    for (int i = 0; i < cart.size(); ++i) {
        const auto [m, n] = cart.coords(i);
        const auto expected = std::polar(1.0, 2.0 * kPi * alpha * (p1 * m + p2 * n));
        CHECK(std::abs(img[i] - expected) <= 1e-12);
    }

    // <F u, v> = <u, F* v> on random data.
    const RimImage u{cart, random_vector(cart.size(), 77)};
    GaussianSampler rng(78);
    ComplexVector v(freq.size());
    for (int i = 0; i < v.size(); ++i) v[i] = {rng.next(), rng.next()};
    const ComplexVector fu = ndft_exact(u, freq);
    const ComplexVector fstar_v = ndft_adjoint_exact(v, freq, cart);
    std::complex<double> lhs(0.0, 0.0), rhs(0.0, 0.0);
    for (int i = 0; i < fu.size(); ++i) lhs += std::conj(fu[i]) * v[i];
    for (int j = 0; j < u.values.size(); ++j) rhs += u.values[j] * fstar_v[j];
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
}

TEST_CASE("nfft approximates the exact ndft within the stated bound") {
    const auto cart = CartesianGrid::create(32, 1.0);
    const auto freq = FrequencyPolarGrid::create(32, 15, 1.0);

    for (const double eps : {1e-6, 1e-10, 1e-14}) {
        const Nfft nfft(cart, freq, eps);
        for (std::uint64_t seed = 0; seed < 3; ++seed) {
            const Vector img = random_vector(cart.size(), 900 + seed);
            const ComplexVector fast = nfft.forward_full(img);
            const ComplexVector exact = ndft_exact(RimImage{cart, img}, freq);
            const double err = (fast - exact).cwiseAbs().maxCoeff();
            CHECK(err <= 4.0 * img.cwiseAbs().sum() * eps);
        }
    }

    // Error decreases monotonically with epsilon.
    const Vector img = random_vector(cart.size(), 950);
    const ComplexVector exact = ndft_exact(RimImage{cart, img}, freq);
    double prev = 1e300;
    for (const double eps : {1e-6, 1e-10}) {
        const Nfft nfft(cart, freq, eps);
        const double err = (nfft.forward_full(img) - exact).cwiseAbs().maxCoeff();
        CHECK(err < prev);
        prev = err;
    }

    const Nfft nfft(cart, freq, 1e-10);
    CHECK(nfft.forward_full(Vector::Zero(cart.size())).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(Nfft(cart, freq, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(Nfft(cart, freq, 1e-10, 0.5), std::invalid_argument);
}

TEST_CASE("apply_d and remove_d") {
    const auto freq = FrequencyPolarGrid::create(6, 2, 0.8);
    GaussianSampler rng(101);
    ComplexVector spec(freq.size());
    for (int i = 0; i < spec.size(); ++i) spec[i] = {rng.next(), rng.next()};

    const ComplexVector d_spec = apply_d(spec, freq, 1.0, 1.0);
    for (int t = 0; t < freq.n_theta; ++t) CHECK(std::abs(d_spec[freq.index(0, t)]) == 0.0);

    // Unit entry at omega = delta_omega with delta_r = n_r = 1 becomes 2 pi i d_omega.
    ComplexVector unit = ComplexVector::Zero(freq.size());
    unit[freq.index(1, 0)] = 1.0;
    const ComplexVector scaled = apply_d(unit, freq, 1.0, 1.0);
    CHECK(std::abs(scaled[freq.index(1, 0)] -
                   std::complex<double>(0.0, 2.0 * kPi * freq.delta_omega())) <= 1e-15);

    // D then D^{-1} is the identity away from omega = 0.
    const FdmVector packed = theta_pack(apply_d(spec, freq, 0.9, 1.3), freq);
    const FdmVector undone = remove_d(packed, 0.9, 1.3);
    const ComplexVector full = theta_unpack(undone);
    for (int t = 0; t < freq.n_theta; ++t)
        for (int sp = 1; sp < freq.n_tau / 2; ++sp) {
            const int i = freq.index(sp, t);
            CHECK(std::abs(full[i] - spec[i]) <= 1e-14 * std::abs(spec[i]) + 1e-14);
        }
}

TEST_CASE("forward operator adjoint and linearity") {
    const auto cart = CartesianGrid::create(16, 1.0);
    const auto freq = FrequencyPolarGrid::create(16, 7, 1.0);

    for (const NdftMode mode : {NdftMode::exact, NdftMode::nfft}) {
        const ForwardOperator op(cart, freq, 1.2, mode, 1e-12);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const Vector x = random_vector(op.image_size(), 1000 + seed);
            const Vector v = random_vector(op.data_size(), 2000 + seed);
            const double lhs = op.apply(x).dot(v);
            const double rhs = x.dot(op.adjoint(v));
            CHECK(std::abs(lhs - rhs) <= 1e-10 * x.norm() * v.norm());
        }

        const Vector a = random_vector(op.image_size(), 3000);
        const Vector b = random_vector(op.image_size(), 3001);
        const Vector lin = op.apply(2.0 * a - 0.5 * b);
        const Vector expect = 2.0 * op.apply(a) - 0.5 * op.apply(b);
        CHECK((lin - expect).cwiseAbs().maxCoeff() <= 1e-12 * expect.cwiseAbs().maxCoeff());
    }
}

TEST_CASE("constant images are invisible on axis-aligned angles") {
    // The FoV-truncated constant is a slab whose edges radiate at generic
    // angles; on the axis-aligned angles theta in {0, pi/2} the discrete
    // operator annihilates constants exactly.
    const auto cart = CartesianGrid::create(16, 1.0);
    const auto freq = FrequencyPolarGrid::create(16, 2, 1.0);
    const ForwardOperator op(cart, freq, 1.0, NdftMode::exact);
    const Vector y = op.apply(Vector::Constant(cart.size(), 3.3));
    CHECK(y.cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("simulated deflections of a constant map vanish") {
    const auto cart = CartesianGrid::create(32, 1.0);
    const RimImage constant{cart, Vector::Constant(cart.size(), 2.2)};
    const auto polar = matched_polar_grid(cart, 32, 6);
    const Sinogram s = simulate_deflections(constant, polar, 1.5);
    CHECK(s.values.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("deflection symmetry under theta -> theta + pi") {
    const auto cart = CartesianGrid::create(64, 1.0);
    const RimImage ball = make_ball(cart, default_ball_center(cart), default_ball_radius(cart),
                                    2.8e-3);
    for (const double theta : {0.3, 1.1, 2.0}) {
        for (const double tau : {-7.3, 2.0, 11.5}) {
            const double direct = simulate_deflection_at(ball, tau, theta, 1.0);
            const double mirrored = simulate_deflection_at(ball, -tau, theta + kPi, 1.0);
            CHECK(direct == doctest::Approx(-mirrored).epsilon(1e-12));
        }
    }
}

TEST_CASE("deflectometric slice theorem at reduced scale") {
    // Measurement-path oracle vs Fourier-path operator on the ball phantom.
    const auto cart = CartesianGrid::create(64, 1.0);
    const RimImage ball = make_ball(cart, default_ball_center(cart), default_ball_radius(cart),
                                    2.8e-3);
    const auto polar = matched_polar_grid(cart, 64, 90);
    const auto freq = FrequencyPolarGrid::from_polar(polar);

    const FdmVector from_rays = radial_dft(simulate_deflections(ball, polar, 1.0));
    const ForwardOperator op(cart, freq, 1.0, NdftMode::exact);
    const FdmVector from_fourier = op.apply(ball);
    CHECK(rel_err(from_rays.values, from_fourier.values) <= 5e-2);
}

TEST_CASE("fold a full-circle sinogram onto the half circle") {
    const auto cart = CartesianGrid::create(32, 1.0);
    const RimImage ball = make_ball(cart, {3.0, 2.0}, 7.0, 1e-3);

    // Odd count: 9 angles over 2 pi interleave to 9 over pi.
    const int full_count = 9;
    const int T = 32;
    Vector values(T * full_count);
    for (int t = 0; t < full_count; ++t) {
        const double theta = 2.0 * kPi * t / full_count;
        for (int s = -T / 2; s < T / 2; ++s)
            values[t * T + s + T / 2] = simulate_deflection_at(ball, s * 1.0, theta, 1.0);
    }
    const Sinogram folded = fold_full_circle(values, T, full_count, 1.0);
    CHECK(folded.grid.n_theta == full_count);
    const Sinogram direct = simulate_deflections(ball, folded.grid, 1.0);
    CHECK((folded.values - direct.values).norm() <= 1e-10 * direct.values.norm());

    // Even count: opposite angles average into n/2 slots.
    const int even_count = 8;
    Vector evens(T * even_count);
    for (int t = 0; t < even_count; ++t) {
        const double theta = 2.0 * kPi * t / even_count;
        for (int s = -T / 2; s < T / 2; ++s)
            evens[t * T + s + T / 2] = simulate_deflection_at(ball, s * 1.0, theta, 1.0);
    }
    const Sinogram folded_even = fold_full_circle(evens, T, even_count, 1.0);
    CHECK(folded_even.grid.n_theta == 4);
    const Sinogram direct_even = simulate_deflections(ball, folded_even.grid, 1.0);
    // The s = -T/2 column has no mirrored ray; compare away from it.
    double num = 0.0, den = 0.0;
    for (int t = 0; t < 4; ++t)
        for (int s = -T / 2 + 1; s < T / 2; ++s) {
            const double d = folded_even(s, t) - direct_even(s, t);
            num += d * d;
            den += direct_even(s, t) * direct_even(s, t);
        }
    CHECK(std::sqrt(num) <= 1e-10 * std::sqrt(den) + 1e-14);
}
