#include "raytrans/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace raytrans {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

std::uint64_t bswap64(std::uint64_t x) {
    x = ((x & 0x00FF00FF00FF00FFull) << 8) | ((x & 0xFF00FF00FF00FF00ull) >> 8);
    x = ((x & 0x0000FFFF0000FFFFull) << 16) | ((x & 0xFFFF0000FFFF0000ull) >> 16);
    return (x << 32) | (x >> 32);
}

void put_le64(std::ofstream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    if constexpr (std::endian::native == std::endian::big) bits = bswap64(bits);
    out.write(reinterpret_cast<const char*>(&bits), 8);
}

double get_le64(std::ifstream& in) {
    std::uint64_t bits = 0;
    in.read(reinterpret_cast<char*>(&bits), 8);
    if constexpr (std::endian::native == std::endian::big) bits = bswap64(bits);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

std::string header_line(std::ifstream& in, const std::string& key) {
    std::string line;
    if (!std::getline(in, line)) throw DomainError("sinogram file: truncated header");
    if (line.rfind(key + "=", 0) != 0) throw DomainError("sinogram file: expected header '" + key + "='");
    return line.substr(key.size() + 1);
}

}  // namespace

void write_sinogram(const std::string& path, const Sinogram& sino) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open for writing: " + path);
    char buf[128];
    out << "format=sinogram-v1\n";
    out << "family=" << sino.family_name << "\n";
    out << "kind=" << (sino.kind == Sinogram::Kind::plain ? "plain" : "attenuated") << "\n";
    out << "ntheta=" << sino.grid.ntheta << "\n";
    out << "ns=" << sino.grid.ns << "\n";
    std::snprintf(buf, sizeof buf, "srange=%.17g,%.17g\n", sino.grid.smin, sino.grid.smax);
    out << buf;
    for (const double v : sino.values) put_le64(out, v);
    if (!out) throw DomainError("write failed: " + path);
}

Sinogram read_sinogram(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open sinogram: " + path);
    if (header_line(in, "format") != "sinogram-v1")
        throw DomainError("sinogram file: unsupported format version");
    Sinogram sino;
    sino.family_name = header_line(in, "family");
    const std::string kind = header_line(in, "kind");
    if (kind == "plain")
        sino.kind = Sinogram::Kind::plain;
    else if (kind == "attenuated")
        sino.kind = Sinogram::Kind::attenuated;
    else
        throw DomainError("sinogram file: unknown kind '" + kind + "'");
    const int ntheta = std::stoi(header_line(in, "ntheta"));
    const int ns = std::stoi(header_line(in, "ns"));
    const std::string sr = header_line(in, "srange");
    const auto comma = sr.find(',');
    if (comma == std::string::npos) throw DomainError("sinogram file: malformed srange");
    const double smin = std::stod(sr.substr(0, comma));
    const double smax = std::stod(sr.substr(comma + 1));
    sino.grid = SGrid(ntheta, ns, smin, smax);
    sino.values.resize(static_cast<std::size_t>(ntheta) * ns);
    for (double& v : sino.values) v = get_le64(in);
    if (!in) throw DomainError("sinogram file: truncated data: " + path);
    return sino;
}

void write_pgm16(const std::string& path, const ReconImage& img, const std::optional<ErrorMetrics>& metrics) {
    double vmin = 0.0, vmax = 0.0;
    bool first = true;
    for (int i = 0; i < img.n; ++i)
        for (int j = 0; j < img.n; ++j) {
            if (!img.in_mask(i, j)) continue;
            const double v = img.at(i, j);
            if (first || v < vmin) vmin = v;
            if (first || v > vmax) vmax = v;
            first = false;
        }
    if (first) throw DomainError("write_pgm16: empty mask");
    const double span = vmax > vmin ? vmax - vmin : 1.0;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("cannot open for writing: " + path);
    out << "P5\n" << img.n << " " << img.n << "\n65535\n";
    // raster rows top-to-bottom = decreasing image y; sample = row-major x
    for (int row = 0; row < img.n; ++row) {
        const int j = img.n - 1 - row;
        for (int i = 0; i < img.n; ++i) {
            std::uint16_t q = 0;
            if (img.in_mask(i, j)) {
                const double t = (img.at(i, j) - vmin) / span;
                q = static_cast<std::uint16_t>(std::lround(std::clamp(t, 0.0, 1.0) * 65535.0));
            }
            const unsigned char hi = static_cast<unsigned char>(q >> 8);
            const unsigned char lo = static_cast<unsigned char>(q & 0xff);
            out.put(static_cast<char>(hi));
            out.put(static_cast<char>(lo));
        }
    }
    if (!out) throw DomainError("write failed: " + path);

    nlohmann::json j;
    j["format"] = "pgm16-sidecar-v1";
    j["n"] = img.n;
    j["delta"] = img.delta;
    j["family"] = img.family_name;
    j["value_min"] = vmin;
    j["value_max"] = vmax;
    j["mapping"] = "sample = round(65535*(value-value_min)/(value_max-value_min)); outside mask = 0";
    j["mask"] = "disc |z| <= 1-delta on the inclusive grid x_i = -1 + 2i/(n-1)";
    if (metrics) {
        j["metrics"]["l2_rel"] = metrics->l2_rel;
        j["metrics"]["linf_rel"] = metrics->linf_rel;
    }
    std::ofstream sj(path + ".json");
    if (!sj) throw DomainError("cannot open for writing: " + path + ".json");
    sj << j.dump(2) << "\n";
}

}  // namespace raytrans
