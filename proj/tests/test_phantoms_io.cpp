#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "raytrans/families.hpp"
#include "raytrans/inversion.hpp"
#include "raytrans/io.hpp"
#include "raytrans/phantoms.hpp"
#include "raytrans/transforms.hpp"
#include "raytrans/zeros.hpp"

using namespace raytrans;

TEST_CASE("phantom evaluation: mollifier center, outside support, overlap sum") {
    const Bump m{cplx(0.2, -0.1), 0.3, 1.7, Bump::Kind::mollifier};
    const Phantom p({m}, 0.55);
    CHECK(p(cplx(0.2, -0.1)) == doctest::Approx(1.7).epsilon(1e-14));  // exp(1-1) = 1 at the center
    CHECK(p(cplx(0.2, -0.1) + cplx(0.31, 0.0)) == 0.0);
    CHECK(p(cplx(0.9, 0.0)) == 0.0);

    const Bump g1{cplx(0.0, 0.0), 0.2, 1.0, Bump::Kind::gaussian};
    const Bump g2{cplx(0.1, 0.0), 0.2, 0.5, Bump::Kind::gaussian};
    const Phantom both({g1, g2}, 0.9);
    const cplx z(0.05, 0.07);
    CHECK(both(z) == doctest::Approx(g1.eval(z) + g2.eval(z)).epsilon(1e-15));

    CHECK(eval_phantom(both, DiscPoint(0.05, 0.07)) == both(z));

    // bump exceeding the declared support throws
    CHECK_THROWS_AS(Phantom({{cplx(0.5, 0.0), 0.4, 1.0, Bump::Kind::mollifier}}, 0.6), DomainError);
}

TEST_CASE("mollifier smoothness proxy: 4th differences stay bounded across the edge") {
    const Bump m{cplx(0.0, 0.0), 0.4, 1.0, Bump::Kind::mollifier};
    // quotient |delta^4 f| / h^4 approximates f'''' and must not blow up as h shrinks
    double prev = 0.0;
    for (int level = 0; level < 3; ++level) {
        const double h = 0.01 / (1 << level);
        double worst = 0.0;
        for (double x0 = 0.4 - 6 * h; x0 <= 0.4 + 2 * h; x0 += h / 3) {
            double d4 = m.eval(x0 - 2 * h) - 4 * m.eval(x0 - h) + 6 * m.eval(x0) - 4 * m.eval(x0 + h) +
                        m.eval(x0 + 2 * h);
            worst = std::max(worst, std::abs(d4) / (h * h * h * h));
        }
        if (level > 0) CHECK(worst < 4.0 * prev + 1.0);  // a jump would grow ~16x per halving
        prev = worst;
    }
}

TEST_CASE("error metrics: exact, zero, uniform offset") {
    auto fam = lines_family();
    const Phantom ref({{cplx(0.0, 0.0), 0.2, 1.0, Bump::Kind::gaussian}}, 0.9);
    ReconImage img(64, 0.05);
    img.family_name = fam->name;
    for (int i = 0; i < img.n; ++i)
        for (int j = 0; j < img.n; ++j)
            if (img.in_mask(i, j)) img.at(i, j) = ref(img.pixel(i, j));
    auto m = error_metrics(img, ref);
    CHECK(m.l2_rel == 0.0);
    CHECK(m.linf_rel == 0.0);

    ReconImage zero(64, 0.05);
    m = error_metrics(zero, ref);
    CHECK(m.l2_rel == doctest::Approx(1.0));
    CHECK(m.linf_rel == doctest::Approx(1.0));

    ReconImage off = img;
    double grid_peak = 0.0;
    for (int i = 0; i < off.n; ++i)
        for (int j = 0; j < off.n; ++j)
            if (off.in_mask(i, j)) {
                off.at(i, j) += 0.01;  // 1% of the unit peak
                grid_peak = std::max(grid_peak, ref(off.pixel(i, j)));
            }
    m = error_metrics(off, ref);
    CHECK(m.linf_rel == doctest::Approx(0.01 / grid_peak).epsilon(1e-10));
}

TEST_CASE("phantom JSON round trip") {
    const std::string text = R"({
      "support_radius": 0.6,
      "bumps": [
        {"center": [0.2, 0.0], "radius": 0.25, "amplitude": 1.0, "kind": "mollifier"},
        {"center": [-0.1, 0.1], "radius": 0.05, "amplitude": 0.5, "kind": "gaussian"}
      ]})";
    const Phantom p = Phantom::from_json(text);
    CHECK(p.bumps().size() == 2);
    CHECK(p.support_radius() == 0.6);
    const Phantom q = Phantom::from_json(p.to_json());
    for (const cplx z : {cplx(0.2, 0.0), cplx(0.0, 0.05), cplx(-0.1, 0.12)}) CHECK(p(z) == q(z));
    CHECK_THROWS_AS(Phantom::from_json("{\"support_radius\": 0.5, \"bumps\": [{\"center\":[0,0],"
                                       "\"radius\":0.1,\"kind\":\"cube\"}]}"),
                    DomainError);
}

TEST_CASE("sinogram file format: byte-exact round trip") {
    auto fam = lines_family();
    const SGrid g = SGrid::for_family(*fam, 8, 33, 128);
    const Phantom f({{cplx(0.1, 0.0), 0.15, 1.0, Bump::Kind::gaussian}},
                    std::min(0.1 + 0.15 * std::sqrt(std::log(1e14)), 0.9));
    const auto sino = ray_transform(f, *fam, g);
    const std::string path = "/tmp/raytrans_test.sino";
    write_sinogram(path, sino);
    const auto back = read_sinogram(path);
    CHECK(back.family_name == sino.family_name);
    CHECK(back.kind == sino.kind);
    CHECK(back.grid == sino.grid);
    REQUIRE(back.values.size() == sino.values.size());
    for (std::size_t i = 0; i < sino.values.size(); ++i) CHECK(back.values[i] == sino.values[i]);

    // header layout is pinned: six lines then raw little-endian doubles
    std::ifstream in(path, std::ios::binary);
    std::string line;
    std::getline(in, line);
    CHECK(line == "format=sinogram-v1");
    std::getline(in, line);
    CHECK(line == "family=euclidean-lines");
    std::getline(in, line);
    CHECK(line == "kind=plain");
    std::getline(in, line);
    CHECK(line == "ntheta=8");
    std::getline(in, line);
    CHECK(line == "ns=33");
    std::getline(in, line);
    CHECK(line.rfind("srange=", 0) == 0);
    double first = 0.0;
    in.read(reinterpret_cast<char*>(&first), 8);
    CHECK(first == sino.values[0]);
    std::remove(path.c_str());
}

TEST_CASE("pgm16 output and sidecar") {
    ReconImage img(32, 0.05);
    img.family_name = "euclidean-lines";
    for (int i = 0; i < img.n; ++i)
        for (int j = 0; j < img.n; ++j)
            if (img.in_mask(i, j)) img.at(i, j) = img.coord(i);
    const std::string path = "/tmp/raytrans_test.pgm";
    write_pgm16(path, img);
    std::ifstream in(path, std::ios::binary);
    std::string magic, dims, maxval;
    std::getline(in, magic);
    std::getline(in, dims);
    std::getline(in, maxval);
    CHECK(magic == "P5");
    CHECK(dims == "32 32");
    CHECK(maxval == "65535");
    std::vector<unsigned char> raster(32 * 32 * 2);
    in.read(reinterpret_cast<char*>(raster.data()), raster.size());
    CHECK(in.gcount() == static_cast<std::streamsize>(raster.size()));
    // big-endian sample: the brightest masked pixel maps to 65535
    unsigned mx = 0;
    for (std::size_t i = 0; i < raster.size(); i += 2) mx = std::max(mx, 256u * raster[i] + raster[i + 1]);
    CHECK(mx == 65535u);
    std::ifstream sj(path + ".json");
    REQUIRE(sj.good());
    std::string all((std::istreambuf_iterator<char>(sj)), std::istreambuf_iterator<char>());
    CHECK(all.find("value_min") != std::string::npos);
    std::remove(path.c_str());
    std::remove((path + ".json").c_str());
}

TEST_CASE("family JSON: lines written as rational coefficients matches the builtin") {
    // A = 1, B = 1, s = (w2 - w1)/(2i) = (i/2)w1 - (i/2)w2, t = (w1 + w2)/2
    const std::string text = R"({
      "name": "json-lines",
      "A": {"num": [[0, 0, 1, 0]]},
      "B": {"num": [[0, 0, 1, 0]]},
      "s_pol": {"num": [[1, 0, 0, 0.5], [0, 1, 0, -0.5]]},
      "t_pol": {"num": [[1, 0, 0.5, 0], [0, 1, 0.5, 0]]},
      "s_range": [-1.0, 1.0]
    })";
    auto jf = family_from_json(text);
    auto lf = lines_family();
    const DiscPoint z(0.22, -0.31);
    for (const cplx lam : {cplx(0.8, 0.1), cplx(0.2, -0.6), std::polar(1.0, 2.2)}) {
        const auto a = eval_coeffs(*jf, z, lam);
        const auto b = eval_coeffs(*lf, z, lam);
        CHECK(std::abs(a.xi - b.xi) < 1e-14);
        CHECK(std::abs(a.rho - b.rho) < 1e-14);
        CHECK(std::abs(a.s_lambda - b.s_lambda) < 1e-14);
        CHECK(std::abs(a.ds_dz - b.ds_dz) < 1e-14);
        CHECK(std::abs(a.ds_dzbar - b.ds_dzbar) < 1e-14);
    }
    // curve solving reproduces straight lines
    for (double t : {-0.5, 0.1, 0.4})
        for (double s : {-0.3, 0.0, 0.55}) CHECK(std::abs(jf->curve(t, s) - cplx(t, -s)) < 1e-9);
    const auto lim = jf->t_limits(0.6);
    CHECK(lim[1] == doctest::Approx(std::sqrt(0.999 * 0.999 - 0.36)).epsilon(1e-3));
    // zero structure carries over
    CHECK(count_zeros(*jf, z) == 2);
}
