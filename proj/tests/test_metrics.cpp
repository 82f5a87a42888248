#include <doctest.h>

#include "odt/metrics.hpp"
#include "odt/noise.hpp"

using namespace odt;

TEST_CASE("rsnr") {
    const auto grid = CartesianGrid::create(8, 1.0);
    RimImage truth = RimImage::zero(grid);
    truth(0, 0) = 1.0;

    CHECK(rsnr_db(truth, truth) == kSnrCapDb);

    RimImage est = truth;
    est(1, 1) = 0.1;  // ||n|| = 1, ||n - est|| = 0.1
    CHECK(rsnr_db(truth, est) == doctest::Approx(20.0).epsilon(1e-12));

    RimImage shifted{grid, truth.values.array() + 0.5};
    CHECK(rsnr_db(truth, shifted, true) == kSnrCapDb);
    CHECK(rsnr_db(truth, shifted, false) < 20.0);

    CHECK_THROWS_AS(rsnr_db(RimImage::zero(grid), truth), std::invalid_argument);
}

TEST_CASE("rsnr decreases with error when not mean-removed") {
    const auto grid = CartesianGrid::create(8, 1.0);
    GaussianSampler rng(3);
    RimImage truth = RimImage::zero(grid);
    for (int i = 0; i < truth.values.size(); ++i) truth.values[i] = rng.next();
    double prev = 1e9;
    for (const double scale : {0.01, 0.1, 1.0}) {
        RimImage est{grid, truth.values.array() + 0.0};
        est.values[5] += scale;
        const double v = rsnr_db(truth, est);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("msnr") {
    const auto grid = PolarGrid::create(64, 160, 1.0);
    Sinogram clean = Sinogram::zero(grid);
    for (int i = 0; i < clean.values.size(); ++i) clean.values[i] = std::cos(0.02 * i) + 1.5;

    CHECK(msnr_db(clean, clean) == kSnrCapDb);

    Sinogram noisy = clean;
    noisy.values.array() += 0.0;
    noisy.values[0] += clean.values.norm() / 10.0;  // ||eta|| = ||Delta||/10
    CHECK(msnr_db(clean, noisy) == doctest::Approx(20.0).epsilon(1e-9));

    // Monte-Carlo round trip through add_awgn at 10 dB.
    const auto [at10, sigma] = add_awgn(clean, 10.0, 5);
    CHECK(msnr_db(clean, at10) == doctest::Approx(10.0).epsilon(0.05));

    CHECK_THROWS_AS(msnr_db(Sinogram::zero(grid), clean), std::invalid_argument);
}

TEST_CASE("residual energy series") {
    CHECK_THROWS_AS(residual_energy({}), std::invalid_argument);

    std::vector<TraceRecord> zero(3);
    for (int i = 0; i < 3; ++i) zero[i].iter = i + 1;
    for (const double e : residual_energy(zero)) CHECK(e == 0.0);

    TraceRecord r;
    r.iter = 1;
    r.p_res_l1 = 3.0;
    r.d_res_l1 = 4.0;
    const auto series = residual_energy({r});
    CHECK(series.size() == 1);
    CHECK(series[0] == doctest::Approx(25.0));
}
