#include "odt/io.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

namespace odt {

namespace {

template <typename T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
    std::ofstream os(path, mode);
    if (!os) throw io_error("cannot open for writing: " + path);
    return os;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode) {
    std::ifstream is(path, mode);
    if (!is) throw io_error("cannot open for reading: " + path);
    return is;
}

void check_magic(std::istream& is, const char* magic, const std::string& path) {
    char buf[4];
    is.read(buf, 4);
    if (!is || std::memcmp(buf, magic, 4) != 0)
        throw io_error("bad magic in " + path + " (expected " + magic + ")");
}

void write_values(std::ostream& os, const Vector& v) {
    os.write(reinterpret_cast<const char*>(v.data()),
             static_cast<std::streamsize>(v.size() * sizeof(double)));
}

Vector read_values(std::istream& is, Eigen::Index count, const std::string& path) {
    Vector v(count);
    is.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!is) throw io_error("truncated value block in " + path);
    return v;
}

}  // namespace

void write_image(const std::string& path, const RimImage& image) {
    auto os = open_out(path, std::ios::binary);
    os.write("ODTI", 4);
    put<std::uint16_t>(os, 1);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(image.grid.n0));
    put<double>(os, image.grid.delta_r);
    write_values(os, image.values);
    if (!os) throw io_error("write failed: " + path);
}

RimImage read_image(const std::string& path) {
    auto is = open_in(path, std::ios::binary);
    check_magic(is, "ODTI", path);
    const auto version = get<std::uint16_t>(is);
    if (version != 1) throw io_error("unsupported ODTI version in " + path);
    const auto n0 = get<std::uint32_t>(is);
    const auto delta_r = get<double>(is);
    const auto grid = CartesianGrid::create(static_cast<int>(n0), delta_r);
    return {grid, read_values(is, grid.size(), path)};
}

void write_pgm_preview(const std::string& path, const RimImage& image) {
    const int n0 = image.grid.n0;
    auto os = open_out(path, std::ios::binary);
    os << "P5\n" << n0 << " " << n0 << "\n65535\n";
    const double lo = image.values.minCoeff();
    const double hi = image.values.maxCoeff();
    const double span = hi > lo ? hi - lo : 1.0;
    for (int row = n0 - 1; row >= 0; --row)  // top row = largest n
        for (int col = 0; col < n0; ++col) {
            const double v = (image.values[row * n0 + col] - lo) / span;
            const auto q = static_cast<std::uint16_t>(v * 65535.0 + 0.5);
            os.put(static_cast<char>(q >> 8));
            os.put(static_cast<char>(q & 0xff));
        }
    if (!os) throw io_error("write failed: " + path);
}

namespace {

void write_polar(const std::string& path, const char* magic, int n_tau, int n_theta,
                 double delta_tau, const Vector& values) {
    auto os = open_out(path, std::ios::binary);
    os.write(magic, 4);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(n_tau));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(n_theta));
    put<double>(os, delta_tau);
    write_values(os, values);
    if (!os) throw io_error(std::string("write failed: ") + path);
}

struct PolarHeader {
    int n_tau;
    int n_theta;
    double delta_tau;
};

PolarHeader read_polar_header(std::istream& is, const char* magic, const std::string& path) {
    check_magic(is, magic, path);
    PolarHeader h;
    h.n_tau = static_cast<int>(get<std::uint32_t>(is));
    h.n_theta = static_cast<int>(get<std::uint32_t>(is));
    h.delta_tau = get<double>(is);
    return h;
}

}  // namespace

void write_sinogram(const std::string& path, const Sinogram& s) {
    write_polar(path, "ODTS", s.grid.n_tau, s.grid.n_theta, s.grid.delta_tau, s.values);
}

Sinogram read_sinogram(const std::string& path) {
    auto is = open_in(path, std::ios::binary);
    const auto h = read_polar_header(is, "ODTS", path);
    const auto grid = PolarGrid::create(h.n_tau, h.n_theta, h.delta_tau);
    return {grid, read_values(is, grid.size(), path)};
}

void write_fdm(const std::string& path, const FdmVector& f) {
    write_polar(path, "ODTF", f.grid.n_tau, f.grid.n_theta, f.grid.delta_tau, f.values);
}

FdmVector read_fdm(const std::string& path) {
    auto is = open_in(path, std::ios::binary);
    const auto h = read_polar_header(is, "ODTF", path);
    const auto grid = FrequencyPolarGrid::create(h.n_tau, h.n_theta, h.delta_tau);
    return {grid, read_values(is, grid.size(), path)};
}

void write_budget(const std::string& path, const NoiseBudget& b) {
    auto os = open_out(path, std::ios::out);
    os << std::setprecision(17);
    os << "eps_obs = " << b.eps_obs << "\n";
    os << "eps_model = " << b.eps_model << "\n";
    os << "eps_nfft = " << b.eps_nfft << "\n";
    os << "eps_total = " << b.eps_total << "\n";
    os << "sigma_z = " << b.sigma_z << "\n";
    os << "chernoff_c = " << b.chernoff_c << "\n";
    if (!os) throw io_error("write failed: " + path);
}

NoiseBudget read_budget(const std::string& path) {
    auto is = open_in(path, std::ios::in);
    std::map<std::string, double> kv;
    std::string line;
    while (std::getline(is, line)) {
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        key.erase(key.find_last_not_of(" \t") + 1);
        key.erase(0, key.find_first_not_of(" \t"));
        kv[key] = std::stod(line.substr(eq + 1));
    }
    NoiseBudget b = NoiseBudget::from_components(kv.at("eps_obs"), kv.at("eps_model"),
                                                 kv.at("eps_nfft"), kv.at("sigma_z"),
                                                 kv.at("chernoff_c"));
    return b;
}

void write_trace(const std::string& path, const std::vector<TraceRecord>& trace) {
    auto os = open_out(path, std::ios::out);
    os << "iter,p_res,d_res,rel_change,mu,nu,rho,rsnr_db\n";
    os << std::setprecision(12);
    for (const auto& r : trace) {
        os << r.iter << ',' << r.p_res_l1 << ',' << r.d_res_l1 << ',' << r.rel_change << ','
           << r.mu << ',' << r.nu << ',' << r.rho << ',';
        if (r.rsnr_db) os << *r.rsnr_db;
        os << '\n';
    }
    if (!os) throw io_error("write failed: " + path);
}

bool file_exists(const std::string& path) { return std::filesystem::exists(path); }

}  // namespace odt
