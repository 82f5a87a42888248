#include <doctest.h>

#include <cmath>

#include "odt/noise.hpp"
#include "odt/prox.hpp"

using namespace odt;

namespace {

Vector random_vector(int n, std::uint64_t seed) {
    GaussianSampler rng(seed);
    Vector v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.next();
    return v;
}

GradientField random_field(int n, std::uint64_t seed) {
    return {random_vector(n, seed), random_vector(n, seed + 1)};
}

}  // namespace

TEST_CASE("gradient of a constant image vanishes") {
    const auto grid = CartesianGrid::create(8, 1.0);
    const GradientField g = grad(Vector::Constant(grid.size(), 3.7), grid);
    CHECK(g.d1.cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.d2.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("div is the exact negative adjoint of grad") {
    const auto grid = CartesianGrid::create(10, 1.0);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Vector x = random_vector(grid.size(), 100 + seed);
        const GradientField p = random_field(grid.size(), 200 + seed);
        const double lhs = grad(x, grid).d1.dot(p.d1) + grad(x, grid).d2.dot(p.d2);
        const double rhs = x.dot(-div(p, grid));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("tv norm closed forms") {
    const auto grid = CartesianGrid::create(8, 1.0);

    // Step of height h across one column: n0 jumps of size h.
    const double h = 0.37;
    Vector step = Vector::Zero(grid.size());
    for (int n = -4; n < 4; ++n)
        for (int m = 0; m < 4; ++m) step[grid.index(m, n)] = h;
    CHECK(tv_norm(step, grid) == doctest::Approx(h * 8).epsilon(1e-12));

    // Single interior pixel of height h: gradient pairs (h,0), (0,h), (-h,-h).
    Vector spike = Vector::Zero(grid.size());
    spike[grid.index(0, 0)] = h;
    CHECK(tv_norm(spike, grid) == doctest::Approx(h * (2.0 + std::sqrt(2.0))).epsilon(1e-12));

    // Homogeneity and translation invariance.
    const Vector x = random_vector(grid.size(), 7);
    CHECK(tv_norm(2.5 * x, grid) == doctest::Approx(2.5 * tv_norm(x, grid)).epsilon(1e-12));
    const Vector shifted = x.array() + 11.0;
    CHECK(tv_norm(shifted, grid) == doctest::Approx(tv_norm(x, grid)).epsilon(1e-12));
    CHECK(tv_norm(Vector::Zero(grid.size()), grid) == 0.0);
}

TEST_CASE("dual ball projection") {
    GradientField small{Vector::Constant(4, 0.3), Vector::Constant(4, 0.4)};
    const GradientField kept = project_dual_ball(small);
    CHECK(kept.d1 == small.d1);
    CHECK(kept.d2 == small.d2);

    GradientField big{Vector::Constant(1, 3.0), Vector::Constant(1, 4.0)};
    const GradientField clipped = project_dual_ball(big);
    CHECK(clipped.d1[0] == doctest::Approx(0.6));
    CHECK(clipped.d2[0] == doctest::Approx(0.8));

    const GradientField q = random_field(30, 42);
    const GradientField once = project_dual_ball(q);
    const GradientField twice = project_dual_ball(once);
    CHECK((twice.d1 - once.d1).cwiseAbs().maxCoeff() <= 1e-15);
    CHECK((twice.d2 - once.d2).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("fidelity ball projection") {
    const Vector y = random_vector(12, 3);
    CHECK(project_fidelity_ball(y, y, 0.5) == y);

    const Vector dir = random_vector(12, 4).normalized();
    const double eps = 0.8;
    const Vector v = y + 2.0 * eps * dir;
    const Vector mid = project_fidelity_ball(v, y, eps);
    CHECK((mid - (y + eps * dir)).norm() <= 1e-12);

    CHECK((project_fidelity_ball(v, y, 0.0) - y).norm() == 0.0);
}

TEST_CASE("fidelity conjugate prox and the Moreau identity") {
    const Vector y = random_vector(10, 5);
    const double eps = 0.3, nu = 0.7;

    CHECK_THROWS_AS(prox_fidelity_conjugate(y, y, eps, 0.0), std::invalid_argument);

    // y = 0, eps = 0: the conjugate prox is the identity.
    const Vector s0 = random_vector(10, 6);
    CHECK((prox_fidelity_conjugate(s0, Vector::Zero(10), 0.0, nu) - s0).norm() <= 1e-15);

    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Vector s = random_vector(10, 50 + seed);
        const Vector lhs = prox_fidelity_conjugate(s, y, eps, nu);
        const Vector rhs = s - nu * project_fidelity_ball(s / nu, y, eps);
        CHECK((lhs - rhs).norm() <= 1e-12);
        // Moreau: prox_{nu F*}(s) + nu prox_{F/nu}(s/nu) = s.
        const Vector recomposed = lhs + nu * project_fidelity_ball(s / nu, y, eps);
        CHECK((recomposed - s).norm() <= 1e-12 * s.norm());
    }

    // 1-D oracle: fine grid search of nu F*(u) + 0.5 (u - s)^2 with
    // F*(u) = u y + eps |u|.
    const double y1 = 0.9, eps1 = 0.4, nu1 = 0.6;
    for (const double s : {0.2, nu1 * y1, -1.7, 3.0}) {
        double best_u = 0.0, best_obj = 1e300;
        for (double u = -6.0; u <= 6.0; u += 1e-5) {
            const double obj = nu1 * (u * y1 + eps1 * std::abs(u)) + 0.5 * (u - s) * (u - s);
            if (obj < best_obj) best_obj = obj, best_u = u;
        }
        Vector sv(1), yv(1);
        sv << s;
        yv << y1;
        CHECK(prox_fidelity_conjugate(sv, yv, eps1, nu1)[0] ==
              doctest::Approx(best_u).epsilon(1e-3));
    }
}

TEST_CASE("projection onto the positive orthant with zero border") {
    const auto grid = CartesianGrid::create(6, 1.0);
    const Vector all_negative = Vector::Constant(grid.size(), -1.0);
    CHECK(project_positive_zero_border(all_negative, grid).cwiseAbs().maxCoeff() == 0.0);

    const Vector x = random_vector(grid.size(), 9);
    const Vector once = project_positive_zero_border(x, grid);
    CHECK(project_positive_zero_border(once, grid) == once);
    for (const int i : grid.boundary_indices()) CHECK(once[i] == 0.0);
    CHECK(once.minCoeff() >= 0.0);
}

TEST_CASE("prox of the l2 norm") {
    Vector inside(2);
    inside << 0.3, 0.4;
    CHECK(prox_l2_norm(inside, 1.0).norm() == 0.0);

    Vector x(2);
    x << 2.0, 0.0;
    const Vector shrunk = prox_l2_norm(x, 1.0);
    CHECK(shrunk[0] == doctest::Approx(1.0));
    CHECK(shrunk[1] == 0.0);

    // 2-D grid-search oracle for the prox definition.
    Vector z(2);
    z << 1.3, -0.6;
    const double mu = 0.5;
    double best_obj = 1e300;
    Eigen::Vector2d best_u;
    for (double u0 = -2.0; u0 <= 2.0; u0 += 1e-3)
        for (double u1 = -2.0; u1 <= 2.0; u1 += 1e-3) {
            Eigen::Vector2d u(u0, u1);
            const double obj = mu * u.norm() + 0.5 * (u - Eigen::Vector2d(z)).squaredNorm();
            if (obj < best_obj) best_obj = obj, best_u = u;
        }
    const Vector got = prox_l2_norm(z, mu);
    CHECK((got - Vector(best_u)).norm() <= 5e-3);
}

TEST_CASE("product-space prox of G") {
    const auto identity_prox = [](const Vector& v, double) { return v; };

    const Vector z1 = random_vector(6, 11), z2 = random_vector(6, 12);
    const auto both = prox_product_g({z1, z2}, 0.8, identity_prox);
    CHECK(both.size() == 2);
    CHECK((both[0] - both[1]).norm() == 0.0);
    CHECK((both[0] - 0.5 * (z1 + z2)).norm() <= 1e-15);

    const auto single = prox_product_g({z1}, 0.8,
                                       [](const Vector& v, double mu) { return prox_l2_norm(v, mu); });
    CHECK((single[0] - prox_l2_norm(z1, 0.8)).norm() == 0.0);

    // H = indicator of P0: the constrained minimum is separable per pixel;
    // compare against a per-coordinate grid search of sum_j (zeta_j - u)^2.
    const auto grid = CartesianGrid::create(4, 1.0);
    const Vector a = random_vector(grid.size(), 13), b = random_vector(grid.size(), 14);
    const auto proj = [&grid](const Vector& v, double) {
        return project_positive_zero_border(v, grid);
    };
    const auto blocks = prox_product_g({a, b}, 0.8, proj);
    const auto boundary = grid.boundary_indices();
    for (int i = 0; i < grid.size(); ++i) {
        double best_u = 0.0, best_obj = 1e300;
        const bool on_border =
            std::find(boundary.begin(), boundary.end(), i) != boundary.end();
        for (double u = 0.0; u <= 4.0; u += 1e-4) {
            if (on_border && u > 0.0) break;
            const double obj = (a[i] - u) * (a[i] - u) + (b[i] - u) * (b[i] - u);
            if (obj < best_obj) best_obj = obj, best_u = u;
        }
        CHECK(blocks[0][i] == doctest::Approx(best_u).epsilon(1e-3));
    }
}

TEST_CASE("projections are nonexpansive") {
    const auto grid = CartesianGrid::create(6, 1.0);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Vector a = random_vector(grid.size(), 300 + seed);
        const Vector b = random_vector(grid.size(), 400 + seed);
        CHECK((project_positive_zero_border(a, grid) - project_positive_zero_border(b, grid))
                  .norm() <= (a - b).norm() + 1e-15);

        const Vector y = random_vector(grid.size(), 500);
        CHECK((project_fidelity_ball(a, y, 0.7) - project_fidelity_ball(b, y, 0.7)).norm() <=
              (a - b).norm() + 1e-15);

        const GradientField fa = random_field(18, 600 + seed);
        const GradientField fb = random_field(18, 700 + seed);
        const GradientField pa = project_dual_ball(fa);
        const GradientField pb = project_dual_ball(fb);
        const double dist_before =
            std::sqrt((fa.d1 - fb.d1).squaredNorm() + (fa.d2 - fb.d2).squaredNorm());
        const double dist_after =
            std::sqrt((pa.d1 - pb.d1).squaredNorm() + (pa.d2 - pb.d2).squaredNorm());
        CHECK(dist_after <= dist_before + 1e-15);
    }
}
