#pragma once

#include <cstdint>
#include <functional>
#include <memory>

#include "odt/forward.hpp"
#include "odt/metrics.hpp"
#include "odt/prox.hpp"

namespace odt {

/// Minimal linear-operator interface for the iterative machinery.
struct LinearOp {
    virtual ~LinearOp() = default;
    virtual int rows() const = 0;
    virtual int cols() const = 0;
    virtual Vector apply(const Vector& x) const = 0;
    virtual Vector adjoint(const Vector& v) const = 0;
};

/// Dense matrix operator, used by oracles and small tests.
struct DenseOp final : LinearOp {
    Eigen::MatrixXd a;
    explicit DenseOp(Eigen::MatrixXd m) : a(std::move(m)) {}
    int rows() const override { return static_cast<int>(a.rows()); }
    int cols() const override { return static_cast<int>(a.cols()); }
    Vector apply(const Vector& x) const override { return a * x; }
    Vector adjoint(const Vector& v) const override { return a.transpose() * v; }
};

/// Adapter exposing a ForwardOperator as a LinearOp.
struct ForwardOpAdapter final : LinearOp {
    const ForwardOperator& op;
    explicit ForwardOpAdapter(const ForwardOperator& o) : op(o) {}
    int rows() const override { return op.data_size(); }
    int cols() const override { return op.image_size(); }
    Vector apply(const Vector& x) const override { return op.apply(x); }
    Vector adjoint(const Vector& v) const override { return op.adjoint(v); }
};

/// Largest singular value by power iteration on K*K, scaled by a 1.01 safety
/// factor against under-iterated estimates. Returns 0 for the zero operator.
double operator_norm(const LinearOp& op, int n_iter = 64, std::uint64_t seed = 12345);

struct SolverParams {
    double mu0 = 0.0;  // 0 selects 0.9 / |||K|||
    double nu0 = 0.0;
    double rho0 = 0.5;
    double gamma = 1.1;
    double beta = 0.95;
    double c_balance = 1000.0;
    double theta_relax = 1.0;
    long max_iter = 500000;
    double threshold = 1e-5;  // relative-change stop; <= 0 disables
    bool adaptive = true;
    int power_iters = 64;
    bool record_trace = true;
};

enum class StopReason { threshold, max_iter };

struct ReconResult {
    RimImage image;
    long iterations = 0;
    StopReason stop_reason = StopReason::max_iter;
    std::vector<TraceRecord> trace;
    double wall_time_s = 0.0;
};

/// State of the generic primal-dual loop (one operator K, duals v). kx and
/// kx_bar cache K applied to the primal iterates so residual evaluation costs
/// no extra operator applications.
struct CpState {
    Vector x, x_bar, v;
    Vector kx, kx_bar;
    Vector primal_residual, dual_residual;
    long k = 0;
    double mu = 0.0, nu = 0.0, rho = 0.5;
};

struct CpProxes {
    // prox of nu F* and of mu G; both receive the stepsize second.
    std::function<Vector(const Vector&, double)> prox_fstar;
    std::function<Vector(const Vector&, double)> prox_g;
};

CpState make_cp_state(const Vector& x0, int dual_size, double mu, double nu, double rho0);

/// One iteration of the primal-dual scheme with relaxation theta; updates the
/// residual vectors and applies the residual-balancing stepsize rule when
/// params.adaptive is set.
void cp_iterate(CpState& state, const LinearOp& k_op, const CpProxes& proxes,
                const SolverParams& params);

/// TV-l2 reconstruction with positivity and frontier constraints, solved by
/// the adaptive product-space primal-dual iteration. x starts from the FBP
/// solution.
ReconResult reconstruct_tv_l2(const FdmVector& y, const ForwardOperator& op, double eps,
                              SolverParams params = {}, const RimImage* ground_truth = nullptr);

/// Minimum-energy reconstruction min ||u||_2 s.t. ||y - Phi u|| <= eps.
/// eps = 0 reproduces the equality-constrained pseudo-inverse solution.
ReconResult reconstruct_me(const FdmVector& y, const ForwardOperator& op, double eps,
                           SolverParams params = {}, const RimImage* ground_truth = nullptr);

/// Deflectometric filtered back projection: per-angle Hilbert filtering
/// (n_r/2)(-i sign omega) in the radial frequency domain, then angular
/// back-projection with linear interpolation in tau.
RimImage reconstruct_fbp(const Sinogram& sinogram, const CartesianGrid& cart, double n_r);

enum class BaselineMethod { me, tvl2 };

/// Reconstruction against the absorption-tomography operator Phi_AT = Theta F
/// (op built with include_d = false). The ODT-without-D pathway feeds
/// remove_d(y) through this entry point.
ReconResult reconstruct_at_baseline(const FdmVector& y_at, const ForwardOperator& op_at,
                                    double eps, SolverParams params = {},
                                    BaselineMethod method = BaselineMethod::me,
                                    const RimImage* ground_truth = nullptr);

/// Per-angle rotation-center calibration: shift each trace so the midpoint of
/// its extremal deflections lands on tau = 0 (integer shift, zero fill).
Sinogram calibrate_center(const Sinogram& sinogram);

}  // namespace odt
