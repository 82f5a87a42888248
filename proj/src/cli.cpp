#include "odt/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "odt/io.hpp"
#include "odt/phantoms.hpp"
#include "odt/solvers.hpp"

namespace odt::cli {

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory: " + dir);
}

bool should_write(const std::string& path, bool force, std::ostream& log) {
    if (!force && fs::exists(path)) {
        log << "exists, skipping (use --force): " << path << "\n";
        return false;
    }
    return true;
}

std::string msnr_token(double msnr_db) {
    if (std::isinf(msnr_db)) return "inf";
    std::ostringstream ss;
    ss << msnr_db;
    return ss.str();
}

double image_l1_bound(const RimImage& image) {
    // ||n||_1 <= N * delta_n with delta_n the expected dynamics.
    return image.values.size() * image.values.cwiseAbs().maxCoeff();
}

}  // namespace

std::string cmd_phantom(const PhantomOptions& opt, const CommonOptions& common,
                        std::ostream& log) {
    ensure_dir(common.out_dir);
    ExperimentConfig cfg;
    cfg.phantom = opt.kind;
    cfg.delta_n = opt.delta_n;
    cfg.n0 = opt.n0;
    cfg.delta_r = opt.delta_r;
    const RimImage image = build_phantom(cfg);

    const std::string path = join(common.out_dir, "phantom_" + opt.kind + ".odti");
    if (should_write(path, common.force, log)) {
        write_image(path, image);
        write_pgm_preview(path.substr(0, path.size() - 5) + ".pgm", image);
        log << "wrote " << path << "\n";
    }
    return path;
}

std::string cmd_simulate(const SimulateOptions& opt, const CommonOptions& common,
                         std::ostream& log) {
    ensure_dir(common.out_dir);
    if (!file_exists(opt.phantom_path)) throw io_error("missing phantom: " + opt.phantom_path);
    const RimImage phantom = read_image(opt.phantom_path);
    const auto polar = matched_polar_grid(phantom.grid, opt.n_tau, opt.n_theta);
    const auto freq = FrequencyPolarGrid::from_polar(polar);
    const bool include_d = opt.model == "odt";
    if (!include_d && opt.model != "at")
        throw std::invalid_argument("simulate: model must be odt or at");

    const ForwardOperator op_acq(phantom.grid, freq, opt.n_r, NdftMode::nfft, opt.eps_acq,
                                 opt.kappa, include_d);
    const FdmVector y0 = op_acq.apply(phantom);
    const Sinogram clean = fdm_to_sinogram(y0);
    const auto [noisy, sigma] = add_awgn(clean, opt.msnr_db, opt.seed);
    const FdmVector y = radial_dft(noisy);

    const NoiseBudget budget =
        build_budget(y, sigma, opt.model_snr_db, opt.eps_rec, image_l1_bound(phantom),
                     phantom.grid, opt.n_r);

    std::ostringstream base;
    base << "sim_" << opt.model << "_nt" << opt.n_theta << "_msnr" << msnr_token(opt.msnr_db)
         << "_s" << opt.seed;
    const std::string stem = join(common.out_dir, base.str());
    if (should_write(stem + ".odtf", common.force, log)) {
        write_sinogram(stem + "_clean.odts", clean);
        write_sinogram(stem + "_noisy.odts", noisy);
        write_fdm(stem + ".odtf", y);
        write_budget(stem + "_budget.txt", budget);
        log << "wrote " << stem << ".odtf (eps_total = " << budget.eps_total << ")\n";
    }
    return stem;
}

std::string cmd_reconstruct(const ReconstructOptions& opt, const CommonOptions& common,
                            std::ostream& log) {
    ensure_dir(common.out_dir);
    if (!file_exists(opt.fdm_path)) throw io_error("missing measurements: " + opt.fdm_path);
    FdmVector y = read_fdm(opt.fdm_path);
    const auto& freq = y.grid;
    const double delta_r = freq.delta_tau * freq.n_tau / opt.n0;
    const auto cart = CartesianGrid::create(opt.n0, delta_r);

    double eps = opt.eps;
    if (!opt.budget_path.empty()) eps = read_budget(opt.budget_path).eps_total;

    RimImage truth;
    const RimImage* truth_ptr = nullptr;
    if (!opt.truth_path.empty()) {
        truth = read_image(opt.truth_path);
        truth_ptr = &truth;
    }

    SolverParams params;
    params.threshold = opt.threshold;
    params.max_iter = opt.max_iter;
    params.c_balance = opt.c_balance;
    params.adaptive = opt.adaptive;

    ReconResult result;
    bool mean_removed_score = true;
    if (opt.method == "fbp") {
        result.image = reconstruct_fbp(fdm_to_sinogram(y), cart, opt.n_r);
        result.iterations = 0;
        result.stop_reason = StopReason::threshold;
    } else if (opt.method == "me") {
        const ForwardOperator op(cart, freq, opt.n_r, NdftMode::nfft, opt.eps_rec, opt.kappa,
                                 true);
        params.adaptive = false;  // plain CP for the baseline
        result = reconstruct_me(y, op, eps, params, truth_ptr);
    } else if (opt.method == "tvl2") {
        const ForwardOperator op(cart, freq, opt.n_r, NdftMode::nfft, opt.eps_rec, opt.kappa,
                                 true);
        result = reconstruct_tv_l2(y, op, eps, params, truth_ptr);
        mean_removed_score = false;
    } else if (opt.method == "at-me") {
        const ForwardOperator op(cart, freq, opt.n_r, NdftMode::nfft, opt.eps_rec, opt.kappa,
                                 false);
        params.adaptive = false;
        result = reconstruct_at_baseline(y, op, eps, params, BaselineMethod::me, truth_ptr);
    } else if (opt.method == "odt-no-d") {
        y = remove_d(y, delta_r, opt.n_r);
        const ForwardOperator op(cart, freq, opt.n_r, NdftMode::nfft, opt.eps_rec, opt.kappa,
                                 false);
        params.adaptive = false;
        result = reconstruct_at_baseline(y, op, eps, params, BaselineMethod::me, truth_ptr);
    } else {
        throw std::invalid_argument("unknown method: " + opt.method);
    }

    std::string name = "recon_" + opt.method;
    if (!opt.label.empty()) name += "_" + opt.label;
    const std::string image_path = join(common.out_dir, name + ".odti");
    if (should_write(image_path, common.force, log)) {
        write_image(image_path, result.image);
        write_pgm_preview(join(common.out_dir, name + ".pgm"), result.image);
        if (!result.trace.empty()) write_trace(join(common.out_dir, name + "_trace.csv"), result.trace);
    }

    log << "method=" << opt.method << " n_theta=" << freq.n_theta << " label=" << opt.label;
    if (truth_ptr)
        log << " rsnr_db=" << std::setprecision(6)
            << rsnr_db(truth, result.image, mean_removed_score);
    log << " iterations=" << result.iterations << " wall_time_s=" << result.wall_time_s << "\n";
    return image_path;
}

double cmd_evaluate(const EvaluateOptions& opt, std::ostream& log) {
    const RimImage truth = read_image(opt.truth_path);
    const RimImage estimate = read_image(opt.estimate_path);
    const double v = rsnr_db(truth, estimate, opt.mean_removed);
    log << "rsnr_db = " << std::setprecision(10) << v << "\n";
    return v;
}

std::string cmd_calibrate(const CalibrateOptions& opt, const CommonOptions& common,
                          std::ostream& log) {
    ensure_dir(common.out_dir);
    if (!file_exists(opt.sinogram_path)) throw io_error("missing sinogram: " + opt.sinogram_path);
    const Sinogram in = read_sinogram(opt.sinogram_path);
    const Sinogram out = calibrate_center(in);
    const std::string stem = fs::path(opt.sinogram_path).stem().string();
    const std::string path = join(common.out_dir, stem + "_calibrated.odts");
    if (should_write(path, common.force, log)) {
        write_sinogram(path, out);
        log << "wrote " << path << "\n";
    }
    return path;
}

std::string cmd_sweep(const ExperimentConfig& config, const CommonOptions& common,
                      std::ostream& log) {
    ensure_dir(common.out_dir);
    const RimImage phantom = build_phantom(config);
    const auto cart = phantom.grid;

    struct Row {
        std::string method;
        int n_theta;
        double msnr;
        std::uint64_t seed;
        double rsnr;
        long iterations;
        double wall;
    };
    std::vector<Row> rows;

    for (const int n_theta : config.n_theta_list) {
        const auto polar = matched_polar_grid(cart, config.n_tau, n_theta);
        const auto freq = FrequencyPolarGrid::from_polar(polar);
        const ForwardOperator op_acq(cart, freq, config.n_r, NdftMode::nfft, config.eps_acq,
                                     config.kappa, true);
        const FdmVector y0 = op_acq.apply(phantom);
        const Sinogram clean = fdm_to_sinogram(y0);

        for (const double msnr : config.msnr_list) {
            const auto [noisy, sigma] = add_awgn(clean, msnr, config.seed);
            const FdmVector y = radial_dft(noisy);
            const NoiseBudget budget =
                build_budget(y, sigma, config.model_snr_db, config.eps_rec,
                             image_l1_bound(phantom), cart, config.n_r);

            const ForwardOperator op_rec(cart, freq, config.n_r, NdftMode::nfft, config.eps_rec,
                                         config.kappa, true);
            for (const auto& method : config.methods) {
                SolverParams params;
                params.threshold = config.threshold;
                params.max_iter = config.max_iter;
                params.c_balance = config.balance_constant();
                params.adaptive = config.adaptive;

                Row row{method, n_theta, msnr, config.seed, 0.0, 0, 0.0};
                if (method == "fbp") {
                    const auto t0 = std::chrono::steady_clock::now();
                    const RimImage rec = reconstruct_fbp(noisy, cart, config.n_r);
                    row.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                                   .count();
                    row.rsnr = rsnr_db(phantom, rec, true);
                } else if (method == "me") {
                    params.adaptive = false;
                    const ReconResult r = reconstruct_me(y, op_rec, budget.eps_total, params);
                    row.rsnr = rsnr_db(phantom, r.image, true);
                    row.iterations = r.iterations;
                    row.wall = r.wall_time_s;
                } else if (method == "tvl2") {
                    const ReconResult r = reconstruct_tv_l2(y, op_rec, budget.eps_total, params);
                    row.rsnr = rsnr_db(phantom, r.image, false);
                    row.iterations = r.iterations;
                    row.wall = r.wall_time_s;
                } else {
                    throw std::invalid_argument("sweep: unknown method " + method);
                }
                rows.push_back(row);
                log << method << " n_theta=" << n_theta << " msnr=" << msnr_token(msnr)
                    << " rsnr_db=" << row.rsnr << " iterations=" << row.iterations << "\n";
            }
        }
    }

    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        if (a.method != b.method) return a.method < b.method;
        if (a.n_theta != b.n_theta) return a.n_theta < b.n_theta;
        return a.msnr < b.msnr;
    });

    const std::string path = join(common.out_dir, "sweep.csv");
    std::ofstream os(path);
    if (!os) throw io_error("cannot open for writing: " + path);
    os << "method,n_theta,msnr_db,seed,rsnr_db,iterations,wall_time_s\n";
    os << std::setprecision(10);
    for (const auto& r : rows)
        os << r.method << ',' << r.n_theta << ',' << msnr_token(r.msnr) << ',' << r.seed << ','
           << r.rsnr << ',' << r.iterations << ',' << r.wall << '\n';
    log << "wrote " << path << "\n";
    return path;
}

}  // namespace odt::cli
