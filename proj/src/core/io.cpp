#include "io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

namespace dirac2d {

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

namespace {

std::string cplx(Complex z) {
    std::ostringstream o;
    o.precision(17);
    o << "[" << z.real() << "," << z.imag() << "]";
    return o.str();
}

}  // namespace

std::string provenance_json(const Provenance& p) {
    std::ostringstream o;
    o.precision(17);
    o << "{\"generator\":\"dirac2d 1.0\",\"config_hash\":\"" << std::hex
      << fnv1a(p.config_text) << std::dec << "\"";
    o << ",\"k_minus\":" << cplx(p.k_minus) << ",\"k_hat\":" << cplx(p.k_hat)
      << ",\"eps_hat\":" << cplx(p.eps_hat);
    o << ",\"mesh\":{\"shape\":\"" << p.shape << "\",\"panels\":" << p.n_panels
      << ",\"nodes\":" << p.n_nodes << ",\"grading\":\"" << p.grading << "\"}";
    if (!p.extra.empty()) o << "," << p.extra;
    o << "}";
    return o.str();
}

void write_matrix_bin(const std::string& path, const Matrix& a) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("write_matrix_bin: cannot open " + path);
    const char magic[4] = {'D', '2', 'D', 'M'};
    uint32_t dtype = 1, rows = uint32_t(a.rows()), cols = uint32_t(a.cols());
    f.write(magic, 4);
    f.write(reinterpret_cast<const char*>(&dtype), 4);
    f.write(reinterpret_cast<const char*>(&rows), 4);
    f.write(reinterpret_cast<const char*>(&cols), 4);
    for (uint32_t i = 0; i < rows; ++i)
        for (uint32_t j = 0; j < cols; ++j) {
            Complex v = a(i, j);
            f.write(reinterpret_cast<const char*>(&v), sizeof(Complex));
        }
}

Matrix read_matrix_bin(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("read_matrix_bin: cannot open " + path);
    char magic[4];
    uint32_t dtype, rows, cols;
    f.read(magic, 4);
    f.read(reinterpret_cast<char*>(&dtype), 4);
    f.read(reinterpret_cast<char*>(&rows), 4);
    f.read(reinterpret_cast<char*>(&cols), 4);
    if (std::memcmp(magic, "D2DM", 4) != 0 || dtype != 1)
        throw std::runtime_error("read_matrix_bin: bad header");
    Matrix a(rows, cols);
    for (uint32_t i = 0; i < rows; ++i)
        for (uint32_t j = 0; j < cols; ++j) {
            Complex v;
            f.read(reinterpret_cast<char*>(&v), sizeof(Complex));
            a(i, j) = v;
        }
    return a;
}

void write_field_grid(const std::string& base, const FieldGrid& g, const Provenance& p,
                      bool also_csv) {
    {
        std::ofstream f(base + ".json");
        if (!f) throw std::runtime_error("write_field_grid: cannot open " + base + ".json");
        f.precision(17);
        f << "{\"bbox\":[" << g.xmin << "," << g.xmax << "," << g.ymin << "," << g.ymax
          << "],\"nx\":" << g.nx << ",\"ny\":" << g.ny << ",\"k_minus\":" << cplx(g.k_minus)
          << ",\"k_plus\":" << cplx(g.k_plus) << ",\"eps_hat\":" << cplx(g.eps_hat)
          << ",\"has_gradient\":" << (g.gradU.empty() ? "false" : "true")
          << ",\"payload\":\"" << base << ".bin\",\"payload_layout\":"
          << "\"row-major complex128 U" << (g.gradU.empty() ? "" : ", then dUdx, dUdy")
          << "; tags row-major int8 appended\","
          << "\"provenance\":" << provenance_json(p) << "}\n";
    }
    {
        std::ofstream f(base + ".bin", std::ios::binary);
        f.write(reinterpret_cast<const char*>(g.U.data()), g.U.size() * sizeof(Complex));
        if (!g.gradU.empty()) {
            std::vector<Complex> gx(g.U.size()), gy(g.U.size());
            for (size_t i = 0; i < g.gradU.size(); ++i) {
                gx[i] = g.gradU[i].x;
                gy[i] = g.gradU[i].y;
            }
            f.write(reinterpret_cast<const char*>(gx.data()), gx.size() * sizeof(Complex));
            f.write(reinterpret_cast<const char*>(gy.data()), gy.size() * sizeof(Complex));
        }
        std::vector<int8_t> tags(g.tag.begin(), g.tag.end());
        f.write(reinterpret_cast<const char*>(tags.data()), tags.size());
    }
    if (also_csv) {
        std::ofstream f(base + ".csv");
        f.precision(17);
        f << "# " << provenance_json(p) << "\n";
        f << "x,y,tag,collar,re_u,im_u\n";
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                int idx = j * g.nx + i;
                double x = g.xmin + (g.xmax - g.xmin) * (i + 0.5) / g.nx;
                double y = g.ymin + (g.ymax - g.ymin) * (j + 0.5) / g.ny;
                f << x << "," << y << "," << g.tag[idx] << "," << g.collar[idx] << ","
                  << g.U[idx].real() << "," << g.U[idx].imag() << "\n";
            }
    }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRecord>& recs,
                     const Provenance& p) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_sweep_csv: cannot open " + path);
    f.precision(17);
    f << "# " << provenance_json(p) << "\n";
    f << "k_minus_re,k_minus_im,cond2,sigma_min,gmres_iters,flag\n";
    for (const auto& r : recs) {
        f << r.k_minus.real() << "," << r.k_minus.imag() << "," << r.cond2 << ","
          << r.sigma_min << ",";
        if (r.gmres_iters >= 0) f << r.gmres_iters;
        f << "," << (r.flag ? 1 : 0) << "\n";
    }
}

void write_density_csv(const std::string& path, const Vector& h, const Mesh& mesh,
                       const Provenance& p) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_density_csv: cannot open " + path);
    f.precision(17);
    const int n = mesh.n_nodes();
    f << "# " << provenance_json(p) << "\n";
    f << "arclength_from_corner,side,abs_h1,abs_h2,abs_h3,abs_h4,re_h3,im_h3\n";
    double acc = 0, total = mesh.total_arclength();
    for (int j = 0; j < n; ++j) {
        acc += 0.5 * mesh.dsigma(j);
        double s = std::min(acc, total - acc);
        char side = (acc <= 0.5 * total) ? 'a' : 'b';
        f << s << "," << side << "," << std::abs(h[j]) << "," << std::abs(h[n + j]) << ","
          << std::abs(h[2 * n + j]) << "," << std::abs(h[3 * n + j]) << ","
          << h[2 * n + j].real() << "," << h[2 * n + j].imag() << "\n";
        acc += 0.5 * mesh.dsigma(j);
    }
}

}  // namespace dirac2d
