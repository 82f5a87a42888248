#include <CLI11.hpp>

#include <iostream>

#include "odt/cli.hpp"
#include "odt/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Compressive optical deflectometric tomography"};
    app.require_subcommand(1);

    std::string config_path;
    odt::cli::CommonOptions common;
    std::uint64_t seed = 1;
    app.add_option("--config", config_path, "experiment config file (key = value lines)");
    app.add_option("--out", common.out_dir, "output directory");
    app.add_option("--seed", seed, "RNG seed");
    app.add_flag("--force", common.force, "overwrite existing outputs");

    odt::cli::PhantomOptions phantom_opt;
    auto* phantom = app.add_subcommand("phantom", "generate a synthetic refractive-index map");
    phantom->add_option("--kind", phantom_opt.kind, "fibers | ball | shepp_logan");
    phantom->add_option("--delta-n", phantom_opt.delta_n, "index contrast (negative = default)");
    phantom->add_option("--n0", phantom_opt.n0, "grid side");
    phantom->add_option("--delta-r", phantom_opt.delta_r, "pixel pitch");

    odt::cli::SimulateOptions sim_opt;
    auto* simulate = app.add_subcommand("simulate", "simulate noisy measurements");
    simulate->add_option("--phantom", sim_opt.phantom_path, "phantom image file")->required();
    simulate->add_option("--n-tau", sim_opt.n_tau, "rays per angle");
    simulate->add_option("--n-theta", sim_opt.n_theta, "angle count");
    simulate->add_option("--n-r", sim_opt.n_r, "reference refractive index");
    simulate->add_option("--msnr", sim_opt.msnr_db, "measurement SNR in dB (inf = noiseless)");
    simulate->add_option("--model", sim_opt.model, "odt | at");
    simulate->add_option("--eps-acq", sim_opt.eps_acq, "acquisition NFFT accuracy");
    simulate->add_option("--eps-rec", sim_opt.eps_rec, "reconstruction NFFT accuracy (budget)");
    simulate->add_option("--model-snr-db", sim_opt.model_snr_db, "modeling-error SNR in dB");

    odt::cli::ReconstructOptions rec_opt;
    auto* reconstruct = app.add_subcommand("reconstruct", "reconstruct an index map");
    reconstruct->add_option("--fdm", rec_opt.fdm_path, "FDM measurement file")->required();
    reconstruct->add_option("--method", rec_opt.method, "fbp | me | tvl2 | at-me | odt-no-d");
    reconstruct->add_option("--budget", rec_opt.budget_path, "noise budget file (sets eps)");
    reconstruct->add_option("--truth", rec_opt.truth_path, "ground-truth image for RSNR");
    reconstruct->add_option("--eps", rec_opt.eps, "fidelity radius when no budget given");
    reconstruct->add_option("--n0", rec_opt.n0, "reconstruction grid side");
    reconstruct->add_option("--n-r", rec_opt.n_r, "reference refractive index");
    reconstruct->add_option("--threshold", rec_opt.threshold, "relative-change stop");
    reconstruct->add_option("--max-iter", rec_opt.max_iter, "iteration cap");
    reconstruct->add_option("--c-balance", rec_opt.c_balance, "residual balancing constant");
    reconstruct->add_option("--adaptive", rec_opt.adaptive, "adaptive stepsizes (0|1)");
    reconstruct->add_option("--eps-rec", rec_opt.eps_rec, "reconstruction NFFT accuracy");
    reconstruct->add_option("--label", rec_opt.label, "suffix for output names");

    odt::cli::EvaluateOptions eval_opt;
    auto* evaluate = app.add_subcommand("evaluate", "RSNR between two image files");
    evaluate->add_option("--truth", eval_opt.truth_path)->required();
    evaluate->add_option("--estimate", eval_opt.estimate_path)->required();
    evaluate->add_flag("--mean-removed", eval_opt.mean_removed);

    odt::cli::CalibrateOptions cal_opt;
    auto* calibrate = app.add_subcommand("calibrate", "rotation-center calibration");
    calibrate->add_option("--sinogram", cal_opt.sinogram_path)->required();

    auto* sweep = app.add_subcommand("sweep", "RSNR vs orientations grid from a config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        odt::ExperimentConfig config;
        if (!config_path.empty()) config = odt::parse_config_file(config_path);
        if (app.count("--out") == 0 && !config.out_dir.empty()) common.out_dir = config.out_dir;
        if (app.count("--seed") > 0) config.seed = seed;
        sim_opt.seed = config.seed;

        if (*phantom) odt::cli::cmd_phantom(phantom_opt, common, std::cout);
        if (*simulate) odt::cli::cmd_simulate(sim_opt, common, std::cout);
        if (*reconstruct) odt::cli::cmd_reconstruct(rec_opt, common, std::cout);
        if (*evaluate) odt::cli::cmd_evaluate(eval_opt, std::cout);
        if (*calibrate) odt::cli::cmd_calibrate(cal_opt, common, std::cout);
        if (*sweep) odt::cli::cmd_sweep(config, common, std::cout);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const odt::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const odt::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const odt::calibration_error& e) {
        std::cerr << "calibration failure: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
