#include "liftdual/fieldio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace liftdual {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path + "'");
    return f;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// rows of numbers after a header that must match
std::vector<std::vector<double>> read_rows(const std::string& path, const std::string& header, std::size_t width) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot read '" + path + "'");
    std::string line;
    if (!std::getline(f, line) || line != header) throw IoError("'" + path + "': expected header '" + header + "'");
    std::vector<std::vector<double>> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            double x = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0') throw IoError("'" + path + "': bad number '" + cell + "'");
            row.push_back(x);
        }
        if (row.size() != width) throw IoError("'" + path + "': wrong column count");
        rows.push_back(std::move(row));
    }
    return rows;
}

int snap(double x, int n, const std::string& path) {
    long i = std::lround(x);
    if (std::abs(x - double(i)) > 1e-6 || i < 0 || i >= n) throw IoError("'" + path + "': coordinate off the grid");
    return int(i);
}

std::string space_header(const GridSpec& g) { return g.dim == 2 ? "x,y" : "x"; }

}  // namespace

void write_scalar_csv(const std::string& path, const ScalarField& v, const GridSpec& g, const DomainMask& mask) {
    check_shape(g, v);
    auto f = open_out(path);
    f << space_header(g) << ",t,value\n";
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i) {
            if (!mask.in(g, i, j)) continue;
            std::string xy = fmt(g.x_center(i)) + (g.dim == 2 ? "," + fmt(g.y_center(j)) : "");
            for (int k = 0; k < g.nt; ++k)
                f << xy << ',' << fmt(g.t_center(k)) << ',' << fmt(v.values[std::size_t(g.col(i, j)) * g.nt + k]) << '\n';
        }
}

ScalarField read_scalar_csv(const std::string& path, const GridSpec& g, const DomainMask& mask) {
    ScalarField v(g);
    const std::size_t w = g.dim + 2;
    for (const auto& r : read_rows(path, space_header(g) + ",t,value", w)) {
        int i = snap((r[0] - g.origin[0]) / g.h - 0.5, g.n[0], path);
        int j = g.dim == 2 ? snap((r[1] - g.origin[1]) / g.h - 0.5, g.n[1], path) : 0;
        int k = snap((r[w - 2] - g.t_min) / g.ht - 0.5, g.nt, path);
        if (!mask.in(g, i, j)) throw IoError("'" + path + "': row outside the domain");
        v.values[std::size_t(g.col(i, j)) * g.nt + k] = r[w - 1];
    }
    return v;
}

void write_flux_csv(const std::string& path, const FluxField& s, int component, const GridSpec& g,
                    const DomainMask& mask) {
    check_shape(g, s);
    if (component < 0 || component > 2 || (component == 1 && g.dim != 2)) throw IoError("no such flux component");
    auto f = open_out(path);
    f << space_header(g) << ",t,value\n";
    auto row = [&](double x, double y, double t, double val) {
        f << fmt(x);
        if (g.dim == 2) f << ',' << fmt(y);
        f << ',' << fmt(t) << ',' << fmt(val) << '\n';
    };
    if (component == 0) {
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i <= g.n[0]; ++i)
                if (mask.xface_active(g, i, j))
                    for (int k = 0; k < g.nt; ++k)
                        row(g.origin[0] + i * g.h, g.y_center(j), g.t_center(k), s.sx[std::size_t(g.xface(i, j)) * g.nt + k]);
    } else if (component == 1) {
        for (int j = 0; j <= g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i)
                if (mask.yface_active(g, i, j))
                    for (int k = 0; k < g.nt; ++k)
                        row(g.x_center(i), g.origin[1] + j * g.h, g.t_center(k), s.sy[std::size_t(g.yface(i, j)) * g.nt + k]);
    } else {
        for (int j = 0; j < g.n[1]; ++j)
            for (int i = 0; i < g.n[0]; ++i)
                if (mask.in(g, i, j))
                    for (int kk = 0; kk <= g.nt; ++kk)
                        row(g.x_center(i), g.y_center(j), g.t_face(kk), s.st[std::size_t(g.col(i, j)) * (g.nt + 1) + kk]);
    }
}

void read_flux_csv(const std::string& path, FluxField& s, int component, const GridSpec& g) {
    check_shape(g, s);
    const std::size_t w = g.dim + 2;
    for (const auto& r : read_rows(path, space_header(g) + ",t,value", w)) {
        double fx = (r[0] - g.origin[0]) / g.h, fy = g.dim == 2 ? (r[1] - g.origin[1]) / g.h : 0.5;
        double ft = (r[w - 2] - g.t_min) / g.ht;
        if (component == 0) {
            int i = snap(fx, g.n[0] + 1, path), j = snap(fy - 0.5, g.n[1], path), k = snap(ft - 0.5, g.nt, path);
            s.sx[std::size_t(g.xface(i, j)) * g.nt + k] = r[w - 1];
        } else if (component == 1) {
            int i = snap(fx - 0.5, g.n[0], path), j = snap(fy, g.n[1] + 1, path), k = snap(ft - 0.5, g.nt, path);
            s.sy[std::size_t(g.yface(i, j)) * g.nt + k] = r[w - 1];
        } else {
            int i = snap(fx - 0.5, g.n[0], path), j = snap(fy - 0.5, g.n[1], path), kk = snap(ft, g.nt + 1, path);
            s.st[std::size_t(g.col(i, j)) * (g.nt + 1) + kk] = r[w - 1];
        }
    }
}

void write_profile_csv(const std::string& path, const Profile& u, const GridSpec& g) {
    auto f = open_out(path);
    f << space_header(g) << ",u\n";
    for (int j = 0; j < g.n[1]; ++j)
        for (int i = 0; i < g.n[0]; ++i) {
            if (!u.defined_on.in(g, i, j)) continue;
            f << fmt(g.x_center(i));
            if (g.dim == 2) f << ',' << fmt(g.y_center(j));
            f << ',' << fmt(u.u[g.col(i, j)]) << '\n';
        }
}

Profile read_profile_csv(const std::string& path, const GridSpec& g, const DomainMask& mask) {
    Profile p{std::vector<double>(g.ncols(), 0.0), mask};
    const std::size_t w = g.dim + 1;
    for (const auto& r : read_rows(path, space_header(g) + ",u", w)) {
        int i = snap((r[0] - g.origin[0]) / g.h - 0.5, g.n[0], path);
        int j = g.dim == 2 ? snap((r[1] - g.origin[1]) / g.h - 0.5, g.n[1], path) : 0;
        p.u[g.col(i, j)] = r[w - 1];
    }
    return p;
}

void write_pgm(const std::string& path, const Image& img) {
    if (img.width <= 0 || img.height <= 0 || img.pixels.size() != std::size_t(img.width) * img.height)
        throw IoError("write_pgm: bad image dimensions");
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double p : img.pixels)
        if (std::isfinite(p)) {
            lo = std::min(lo, p);
            hi = std::max(hi, p);
        }
    if (!std::isfinite(lo)) lo = hi = 0.0;
    auto f = open_out(path);
    f << "P5\n" << img.width << ' ' << img.height << "\n255\n";
    std::vector<unsigned char> bytes(img.pixels.size(), 0);
    for (std::size_t n = 0; n < bytes.size(); ++n) {
        double p = img.pixels[n];
        if (!std::isfinite(p)) continue;
        double x = hi > lo ? (p - lo) / (hi - lo) : 0.0;
        bytes[n] = static_cast<unsigned char>(std::lround(255 * std::clamp(x, 0.0, 1.0)));
    }
    f.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    auto r = open_out(path + ".range");
    r << "min " << fmt(lo) << "\nmax " << fmt(hi) << '\n';
}

Image read_pgm(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read '" + path + "'");
    std::string magic;
    int w = 0, h = 0, maxv = 0;
    f >> magic >> w >> h >> maxv;
    if (magic != "P5" || w <= 0 || h <= 0 || maxv != 255) throw IoError("'" + path + "': not an 8-bit P5 image");
    f.get();
    std::vector<unsigned char> bytes(std::size_t(w) * h);
    if (!f.read(reinterpret_cast<char*>(bytes.data()), std::streamsize(bytes.size()))) throw IoError("'" + path + "': truncated");
    Image img{w, h, std::vector<double>(bytes.begin(), bytes.end())};
    return img;
}

}  // namespace liftdual
