#include "odt/config.hpp"

#include <fstream>
#include <limits>
#include <sstream>

#include "odt/errors.hpp"
#include "odt/phantoms.hpp"

namespace odt {

double ExperimentConfig::phantom_delta_n() const {
    if (delta_n >= 0.0) return delta_n;
    if (phantom == "fibers") return kFibersDeltaN;
    if (phantom == "ball") return kBallDeltaN;
    if (phantom == "shepp_logan") return 1.0;
    throw std::invalid_argument("unknown phantom kind: " + phantom);
}

double ExperimentConfig::balance_constant() const {
    if (c_balance > 0.0) return c_balance;
    return phantom == "shepp_logan" ? 250.0 : 1000.0;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double parse_real(const std::string& s) {
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    return std::stod(s);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) continue;

        if (key == "phantom") cfg.phantom = value;
        else if (key == "delta_n") cfg.delta_n = parse_real(value);
        else if (key == "n0") cfg.n0 = std::stoi(value);
        else if (key == "n_tau") cfg.n_tau = std::stoi(value);
        else if (key == "n_theta") {
            cfg.n_theta_list.clear();
            for (const auto& v : split_list(value)) cfg.n_theta_list.push_back(std::stoi(v));
        } else if (key == "delta_r") cfg.delta_r = parse_real(value);
        else if (key == "delta_tau") cfg.delta_tau = parse_real(value);
        else if (key == "n_r") cfg.n_r = parse_real(value);
        else if (key == "msnr") {
            cfg.msnr_list.clear();
            for (const auto& v : split_list(value)) cfg.msnr_list.push_back(parse_real(v));
        } else if (key == "threshold") cfg.threshold = parse_real(value);
        else if (key == "max_iter") cfg.max_iter = std::stol(value);
        else if (key == "c_balance") cfg.c_balance = parse_real(value);
        else if (key == "adaptive") cfg.adaptive = std::stoi(value) != 0;
        else if (key == "eps_acq") cfg.eps_acq = parse_real(value);
        else if (key == "eps_rec") cfg.eps_rec = parse_real(value);
        else if (key == "kappa") cfg.kappa = parse_real(value);
        else if (key == "model_snr_db") cfg.model_snr_db = parse_real(value);
        else if (key == "seed") cfg.seed = std::stoull(value);
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "methods") cfg.methods = split_list(value);
        else throw std::invalid_argument("unknown config key: " + key);
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw io_error("cannot open config: " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str());
}

RimImage build_phantom(const ExperimentConfig& config) {
    const auto grid = CartesianGrid::create(config.n0, config.delta_r);
    const double dn = config.phantom_delta_n();
    if (config.phantom == "fibers")
        return make_fibers(grid, default_fiber_centers(grid), default_fiber_radius(grid), dn);
    if (config.phantom == "ball")
        return make_ball(grid, default_ball_center(grid), default_ball_radius(grid), dn);
    if (config.phantom == "shepp_logan") return make_shepp_logan(grid, dn);
    throw std::invalid_argument("unknown phantom kind: " + config.phantom);
}

}  // namespace odt
