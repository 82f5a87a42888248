#include "odt/solvers.hpp"

#include <chrono>
#include <cmath>

#include "odt/noise.hpp"

namespace odt {

namespace {

double l1_norm(const Vector& v) { return v.lpNorm<1>(); }
double l1_norm(const GradientField& g) { return g.d1.lpNorm<1>() + g.d2.lpNorm<1>(); }

void check_finite(double x, const char* where) {
    if (!std::isfinite(x)) throw numerical_error(std::string(where) + ": non-finite iterate");
}

}  // namespace

double operator_norm(const LinearOp& op, int n_iter, std::uint64_t seed) {
    GaussianSampler rng(seed);
    Vector v(op.cols());
    for (int i = 0; i < v.size(); ++i) v[i] = rng.next();
    double vn = v.norm();
    if (vn == 0.0) v[0] = 1.0, vn = 1.0;
    v /= vn;

    double lambda = 0.0;
    for (int it = 0; it < n_iter; ++it) {
        const Vector u = op.apply(v);
        lambda = u.squaredNorm();  // Rayleigh quotient of K*K at unit v
        if (lambda == 0.0) return 0.0;
        Vector w = op.adjoint(u);
        const double wn = w.norm();
        if (wn == 0.0) return 0.0;
        v = w / wn;
    }
    return std::sqrt(lambda) * 1.01;
}

CpState make_cp_state(const Vector& x0, int dual_size, double mu, double nu, double rho0) {
    CpState s;
    s.x = x0;
    s.x_bar = x0;
    s.v = Vector::Zero(dual_size);
    s.mu = mu;
    s.nu = nu;
    s.rho = rho0;
    return s;
}

void cp_iterate(CpState& state, const LinearOp& k_op, const CpProxes& proxes,
                const SolverParams& params) {
    // Lazily track K x and K x_bar so residuals need no extra applications.
    if (state.kx.size() == 0) {
        state.kx = k_op.apply(state.x);
        state.kx_bar = k_op.apply(state.x_bar);
    }

    const Vector v_next = proxes.prox_fstar(state.v + state.nu * state.kx_bar, state.nu);
    const Vector x_next = proxes.prox_g(state.x - state.mu * k_op.adjoint(v_next), state.mu);
    const Vector kx_next = k_op.apply(x_next);

    state.primal_residual = (state.x - x_next) / state.mu;
    state.dual_residual = (state.v - v_next) / state.nu + state.kx_bar - kx_next;

    if (params.adaptive) {
        const double p = l1_norm(state.primal_residual);
        const double d = l1_norm(state.dual_residual);
        const double c = params.c_balance;
        if (p > c * d * params.gamma) {
            state.mu *= (1.0 - state.rho);
            state.nu /= (1.0 - state.rho);
            state.rho *= params.beta;
        } else if (p < c * d / params.gamma) {
            state.mu /= (1.0 - state.rho);
            state.nu *= (1.0 - state.rho);
            state.rho *= params.beta;
        }
    }

    state.x_bar = x_next + params.theta_relax * (x_next - state.x);
    state.kx_bar = kx_next + params.theta_relax * (kx_next - state.kx);
    state.x = x_next;
    state.kx = kx_next;
    state.v = v_next;
    ++state.k;
}

namespace {

struct RunControl {
    const RimImage* truth = nullptr;
    const CartesianGrid* grid = nullptr;
};

ReconResult run_generic_cp(const Vector& x0, const LinearOp& k_op, const CpProxes& proxes,
                           SolverParams params, const CartesianGrid& grid,
                           const RimImage* ground_truth) {
    const auto t_start = std::chrono::steady_clock::now();
    double norm_k = operator_norm(k_op, params.power_iters);
    if (!(norm_k > 0.0)) norm_k = 1.0;
    if (params.mu0 <= 0.0) params.mu0 = 0.9 / norm_k;
    if (params.nu0 <= 0.0) params.nu0 = 0.9 / norm_k;

    CpState state = make_cp_state(x0, k_op.rows(), params.mu0, params.nu0, params.rho0);

    ReconResult result;
    StopReason reason = StopReason::max_iter;
    long k = 0;
    while (k < params.max_iter) {
        const Vector x_prev = state.x;
        cp_iterate(state, k_op, proxes, params);
        ++k;
        const double xn = state.x.norm();
        check_finite(xn, "cp");
        const double dx = (state.x - x_prev).norm();
        const double prev_norm = x_prev.norm();
        const double rel = prev_norm > 0.0 ? dx / prev_norm : 0.0;

        if (params.record_trace) {
            TraceRecord rec;
            rec.iter = static_cast<int>(k);
            rec.p_res_l1 = l1_norm(state.primal_residual);
            rec.d_res_l1 = l1_norm(state.dual_residual);
            rec.rel_change = rel;
            rec.mu = state.mu;
            rec.nu = state.nu;
            rec.rho = state.rho;
            if (ground_truth)
                rec.rsnr_db = rsnr_db(*ground_truth, RimImage{grid, state.x}, false);
            result.trace.push_back(rec);
        }
        if (params.threshold > 0.0) {
            const bool stop = prev_norm > 0.0 ? (rel <= params.threshold) : (dx == 0.0 && k >= 2);
            if (stop) {
                reason = StopReason::threshold;
                break;
            }
        }
    }

    result.image = RimImage{grid, state.x};
    result.iterations = k;
    result.stop_reason = reason;
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

}  // namespace

ReconResult reconstruct_me(const FdmVector& y, const ForwardOperator& op, double eps,
                           SolverParams params, const RimImage* ground_truth) {
    if (eps < 0.0) throw std::invalid_argument("reconstruct_me: eps must be >= 0");
    const ForwardOpAdapter k_op(op);
    CpProxes proxes;
    proxes.prox_fstar = [&y, eps](const Vector& s, double nu) {
        return prox_fidelity_conjugate(s, y.values, eps, nu);
    };
    proxes.prox_g = [](const Vector& x, double mu) { return prox_l2_norm(x, mu); };
    return run_generic_cp(Vector::Zero(op.image_size()), k_op, proxes, params, op.cart(),
                          ground_truth);
}

namespace {

/// Stacked map x -> (grad x, Phi x) whose norm bounds the product-space K.
struct StackedTvOp final : LinearOp {
    const ForwardOperator& op;
    explicit StackedTvOp(const ForwardOperator& o) : op(o) {}
    int rows() const override { return 2 * op.image_size() + op.data_size(); }
    int cols() const override { return op.image_size(); }
    Vector apply(const Vector& x) const override {
        const GradientField g = grad(x, op.cart());
        const Vector f = op.apply(x);
        Vector out(rows());
        out << g.d1, g.d2, f;
        return out;
    }
    Vector adjoint(const Vector& v) const override {
        const int n = op.image_size();
        GradientField g{v.segment(0, n), v.segment(n, n)};
        return -div(g, op.cart()) + op.adjoint(v.tail(op.data_size()));
    }
};

}  // namespace

ReconResult reconstruct_tv_l2(const FdmVector& y, const ForwardOperator& op, double eps,
                              SolverParams params, const RimImage* ground_truth) {
    if (eps < 0.0) throw std::invalid_argument("reconstruct_tv_l2: eps must be >= 0");
    const auto t_start = std::chrono::steady_clock::now();
    const CartesianGrid& grid = op.cart();

    double norm_k = operator_norm(StackedTvOp(op), params.power_iters);
    if (!(norm_k > 0.0)) norm_k = 1.0;
    if (params.mu0 <= 0.0) params.mu0 = 0.9 / norm_k;
    if (params.nu0 <= 0.0) params.nu0 = 0.9 / norm_k;
    double mu = params.mu0, nu = params.nu0, rho = params.rho0;

    // x^0 = FBP solution, x_bar^0 = s1^0 = s2^0 = 0.
    Vector x = reconstruct_fbp(fdm_to_sinogram(y), grid, op.n_r()).values;
    GradientField gx = grad(x, grid);
    Vector fx = op.apply(x);
    GradientField gx_bar = GradientField::zero(grid.size());
    Vector fx_bar = Vector::Zero(op.data_size());
    GradientField s1 = GradientField::zero(grid.size());
    Vector s2 = Vector::Zero(op.data_size());

    ReconResult result;
    StopReason reason = StopReason::max_iter;
    long k = 0;
    while (k < params.max_iter) {
        const GradientField s1_prev = s1;
        const Vector s2_prev = s2;

        s1 = project_dual_ball({s1.d1 + nu * gx_bar.d1, s1.d2 + nu * gx_bar.d2});
        s2 = prox_fidelity_conjugate(s2 + nu * fx_bar, y.values, eps, nu);

        const Vector descent = -div(s1, grid) + op.adjoint(s2);
        const Vector x_next = project_positive_zero_border(x - 0.5 * mu * descent, grid);
        const GradientField gx_next = grad(x_next, grid);
        const Vector fx_next = op.apply(x_next);

        const double p = (2.0 / mu) * l1_norm(Vector(x - x_next));
        const double d1 = l1_norm(GradientField{(s1_prev.d1 - s1.d1) / nu + gx_bar.d1 - gx_next.d1,
                                                (s1_prev.d2 - s1.d2) / nu + gx_bar.d2 - gx_next.d2});
        const double d2 = l1_norm(Vector((s2_prev - s2) / nu + fx_bar - fx_next));
        const double d = d1 + d2;

        const double prev_norm = x.norm();
        const double dx = (x_next - x).norm();
        const double rel = prev_norm > 0.0 ? dx / prev_norm : 0.0;
        check_finite(x_next.norm(), "tv_l2");

        if (params.adaptive) {
            if (p > params.c_balance * d * params.gamma) {
                mu *= (1.0 - rho);
                nu /= (1.0 - rho);
                rho *= params.beta;
            } else if (p < params.c_balance * d / params.gamma) {
                mu /= (1.0 - rho);
                nu *= (1.0 - rho);
                rho *= params.beta;
            }
        }

        gx_bar = {2.0 * gx_next.d1 - gx.d1, 2.0 * gx_next.d2 - gx.d2};
        fx_bar = 2.0 * fx_next - fx;
        x = x_next;
        gx = gx_next;
        fx = fx_next;
        ++k;

        if (params.record_trace) {
            TraceRecord rec;
            rec.iter = static_cast<int>(k);
            rec.p_res_l1 = p;
            rec.d_res_l1 = d;
            rec.rel_change = rel;
            rec.mu = mu;
            rec.nu = nu;
            rec.rho = rho;
            if (ground_truth) rec.rsnr_db = rsnr_db(*ground_truth, RimImage{grid, x}, false);
            result.trace.push_back(rec);
        }
        if (params.threshold > 0.0) {
            const bool stop = prev_norm > 0.0 ? (rel <= params.threshold) : (dx == 0.0 && k >= 2);
            if (stop) {
                reason = StopReason::threshold;
                break;
            }
        }
    }

    result.image = RimImage{grid, x};
    result.iterations = k;
    result.stop_reason = reason;
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return result;
}

RimImage reconstruct_fbp(const Sinogram& sinogram, const CartesianGrid& cart, double n_r) {
    const int T = sinogram.grid.n_tau;
    const int n_theta = sinogram.grid.n_theta;
    const double d_tau = sinogram.grid.delta_tau;
    const double d_omega = 1.0 / (T * d_tau);

    const ComplexVector spectrum = radial_dft_full(sinogram);

    // Hilbert filter -i sign(omega), then inverse radial DFT per angle.
    Eigen::MatrixXd filtered(T, n_theta);
    std::vector<std::complex<double>> buf(T);
    for (int t = 0; t < n_theta; ++t) {
        for (int sp = -T / 2; sp < T / 2; ++sp) {
            const double sgn = sp > 0 ? 1.0 : (sp < 0 ? -1.0 : 0.0);
            buf[sp + T / 2] = std::complex<double>(0.0, -sgn) * spectrum[t * T + sp + T / 2];
        }
        for (int s = -T / 2; s < T / 2; ++s) {
            std::complex<double> acc(0.0, 0.0);
            for (int sp = -T / 2; sp < T / 2; ++sp)
                acc += buf[sp + T / 2] *
                       std::polar(1.0, 2.0 * kPi * double(s) * double(sp) / double(T));
            filtered(s + T / 2, t) = d_omega * acc.real();
        }
    }

    // Back-projection with linear interpolation in tau.
    RimImage out = RimImage::zero(cart);
    const int half = cart.n0 / 2;
    const double scale = 0.5 * n_r / n_theta;
    for (int n = -half; n < half; ++n) {
        for (int m = -half; m < half; ++m) {
            const double r1 = m * cart.delta_r, r2 = n * cart.delta_r;
            double acc = 0.0;
            for (int t = 0; t < n_theta; ++t) {
                const double theta = sinogram.grid.theta(t);
                const double tau = -r1 * std::sin(theta) + r2 * std::cos(theta);
                const double sf = tau / d_tau + T / 2;  // slot coordinate
                const int i0 = static_cast<int>(std::floor(sf));
                const double f = sf - i0;
                double v = 0.0;
                if (i0 >= 0 && i0 < T) v += (1.0 - f) * filtered(i0, t);
                if (i0 + 1 >= 0 && i0 + 1 < T) v += f * filtered(i0 + 1, t);
                acc += v;
            }
            out(m, n) = scale * acc;
        }
    }
    return out;
}

ReconResult reconstruct_at_baseline(const FdmVector& y_at, const ForwardOperator& op_at,
                                    double eps, SolverParams params, BaselineMethod method,
                                    const RimImage* ground_truth) {
    if (op_at.include_d())
        throw std::invalid_argument("reconstruct_at_baseline: operator must omit D");
    return method == BaselineMethod::me
               ? reconstruct_me(y_at, op_at, eps, params, ground_truth)
               : reconstruct_tv_l2(y_at, op_at, eps, params, ground_truth);
}

Sinogram calibrate_center(const Sinogram& sinogram) {
    const int T = sinogram.grid.n_tau;
    Sinogram out = Sinogram::zero(sinogram.grid);
    for (int t = 0; t < sinogram.grid.n_theta; ++t) {
        const double* trace = sinogram.values.data() + static_cast<size_t>(t) * T;
        int i_max = 0, i_min = 0;
        for (int p = 1; p < T; ++p) {
            if (trace[p] > trace[i_max]) i_max = p;
            if (trace[p] < trace[i_min]) i_min = p;
        }
        if (trace[i_max] == trace[i_min])
            throw calibration_error("calibrate_center: constant trace at angle " +
                                    std::to_string(t));
        const long shift = std::lround(T / 2.0 - 0.5 * (i_max + i_min));
        for (int p = 0; p < T; ++p) {
            const long src = p - shift;
            out.values[static_cast<size_t>(t) * T + p] =
                (src >= 0 && src < T) ? trace[src] : 0.0;
        }
    }
    return out;
}

}  // namespace odt
