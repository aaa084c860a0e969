// Command-line driver: forward simulation, inversion (plain and attenuated),
// family verification reports, and phantom rendering.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

#include "raytrans/families.hpp"
#include "raytrans/inversion.hpp"
#include "raytrans/io.hpp"
#include "raytrans/verification.hpp"

using namespace raytrans;

namespace {

struct RunConfig {
    std::string family = "euclidean-lines";
    std::string phantom_path, attenuation_path, input_path, out_path, reference_path, report_path;
    int ntheta = 360;
    int ns = 513;
    int grid_n = 256;
    int nt = 1024;
    int lambda_index = -1;
    double delta = kDefaultMaskDelta;
    int threads = 0;
    std::uint64_t seed = 0x5EEDF00DULL;
    bool quick = false;
};

void emit_error(const std::string& type, const std::string& message) {
    nlohmann::json j;
    j["error"]["type"] = type;
    j["error"]["message"] = message;
    std::cerr << j.dump() << "\n";
}

int do_forward(const RunConfig& cfg, bool attenuated) {
    auto fam = family_by_name(cfg.family);
    const Phantom f = Phantom::from_json_file(cfg.phantom_path);
    const SGrid grid(cfg.ntheta, cfg.ns, fam->s_range[0], fam->s_range[1], cfg.nt);
    Sinogram sino;
    if (attenuated) {
        const AttenuationMap a = AttenuationMap::from_json_file(cfg.attenuation_path);
        sino = attenuated_ray_transform(f, a, *fam, grid, cfg.threads);
    } else {
        sino = ray_transform(f, *fam, grid, cfg.threads);
    }
    write_sinogram(cfg.out_path, sino);
    std::printf("%s: family=%s ntheta=%d ns=%d -> %s\n", attenuated ? "forward-att" : "forward",
                fam->name.c_str(), grid.ntheta, grid.ns, cfg.out_path.c_str());
    return 0;
}

int do_invert(const RunConfig& cfg, bool attenuated) {
    auto fam = family_by_name(cfg.family);
    const Sinogram sino = read_sinogram(cfg.input_path);
    ReconOptions opt;
    opt.n = cfg.grid_n;
    opt.delta = cfg.delta;
    opt.lambda_index = cfg.lambda_index;
    opt.threads = cfg.threads;
    ReconImage img;
    if (attenuated) {
        if (!fam->attenuated_certified)
            std::fprintf(stderr,
                         "warning: the attenuated inversion hypothesis u(z, lambda_i) = 0 is not "
                         "certified for family '%s'; run `raytrans verify` for the measured value\n",
                         fam->name.c_str());
        const AttenuationMap a = AttenuationMap::from_json_file(cfg.attenuation_path);
        img = reconstruct_attenuated(sino, a, *fam, opt);
    } else {
        img = reconstruct(sino, *fam, opt);
    }
    std::optional<ErrorMetrics> metrics;
    if (!cfg.reference_path.empty()) {
        const Phantom ref = Phantom::from_json_file(cfg.reference_path);
        metrics = error_metrics(img, ref);
    }
    write_pgm16(cfg.out_path, img, metrics);
    if (metrics)
        std::printf("%s: n=%d l2_rel=%.6g linf_rel=%.6g -> %s\n", attenuated ? "invert-att" : "invert",
                    img.n, metrics->l2_rel, metrics->linf_rel, cfg.out_path.c_str());
    else
        std::printf("%s: n=%d -> %s\n", attenuated ? "invert-att" : "invert", img.n, cfg.out_path.c_str());
    return 0;
}

int do_verify(const RunConfig& cfg) {
    auto fam = family_by_name(cfg.family);
    const auto rep = verify_family(*fam, cfg.seed, cfg.threads, cfg.quick);
    const std::string json = rep.to_json();
    if (!cfg.report_path.empty()) {
        std::ofstream out(cfg.report_path);
        if (!out) throw DomainError("cannot open report path: " + cfg.report_path);
        out << json << "\n";
    }
    for (const auto& c : rep.checks)
        std::printf("%-38s %s  residual=%.3g threshold=%.3g\n", c.name.c_str(),
                    c.pass ? "pass" : "FAIL", c.residual, c.threshold);
    std::printf("verify: family=%s all_pass=%s\n", fam->name.c_str(), rep.all_pass() ? "true" : "false");
    return rep.all_pass() ? 0 : 3;
}

int do_phantom(const RunConfig& cfg) {
    const Phantom f = Phantom::from_json_file(cfg.phantom_path);
    ReconImage img(cfg.grid_n, cfg.delta);
    img.family_name = "(phantom render)";
    for (int i = 0; i < img.n; ++i)
        for (int j = 0; j < img.n; ++j)
            if (img.in_mask(i, j)) img.at(i, j) = f(img.pixel(i, j));
    write_pgm16(cfg.out_path, img);
    std::printf("phantom: n=%d -> %s\n", img.n, cfg.out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ray transforms over rotation-indexed curve families in the unit disc, and their "
                 "inversion via Poisson-weighted filtered backprojection"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--family", cfg.family, "family name or JSON definition path");
        sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
    };
    auto* fwd = app.add_subcommand("forward", "ray transform of a phantom to a sinogram file");
    fwd->add_option("--phantom", cfg.phantom_path, "phantom JSON")->required();
    fwd->add_option("--out", cfg.out_path, "output sinogram path")->required();
    fwd->add_option("--ntheta", cfg.ntheta, "angle count (even)");
    fwd->add_option("--ns", cfg.ns, "transverse node count (odd)");
    fwd->add_option("--tstep", cfg.nt, "quadrature subdivisions per curve");
    add_common(fwd);

    auto* fwda = app.add_subcommand("forward-att", "attenuated ray transform to a sinogram file");
    fwda->add_option("--phantom", cfg.phantom_path, "phantom JSON")->required();
    fwda->add_option("--attenuation", cfg.attenuation_path, "attenuation JSON")->required();
    fwda->add_option("--out", cfg.out_path, "output sinogram path")->required();
    fwda->add_option("--ntheta", cfg.ntheta, "angle count (even)");
    fwda->add_option("--ns", cfg.ns, "transverse node count (odd)");
    fwda->add_option("--tstep", cfg.nt, "quadrature subdivisions per curve");
    add_common(fwda);

    auto* inv = app.add_subcommand("invert", "reconstruct a density from a plain sinogram");
    inv->add_option("--input", cfg.input_path, "input sinogram")->required();
    inv->add_option("--out", cfg.out_path, "output image (PGM, 16-bit)")->required();
    inv->add_option("--grid", cfg.grid_n, "image grid size n (n x n)");
    inv->add_option("--lambda-index", cfg.lambda_index, "override the Blaschke-zero choice");
    inv->add_option("--delta", cfg.delta, "mask margin");
    inv->add_option("--reference", cfg.reference_path, "reference phantom JSON for error metrics");
    add_common(inv);

    auto* inva = app.add_subcommand("invert-att", "reconstruct from an attenuated sinogram");
    inva->add_option("--input", cfg.input_path, "input sinogram")->required();
    inva->add_option("--attenuation", cfg.attenuation_path, "attenuation JSON")->required();
    inva->add_option("--out", cfg.out_path, "output image (PGM, 16-bit)")->required();
    inva->add_option("--grid", cfg.grid_n, "image grid size n (n x n)");
    inva->add_option("--lambda-index", cfg.lambda_index, "override the Blaschke-zero choice");
    inva->add_option("--delta", cfg.delta, "mask margin");
    inva->add_option("--reference", cfg.reference_path, "reference phantom JSON for error metrics");
    add_common(inva);

    auto* ver = app.add_subcommand("verify", "numerical admissibility report for a family");
    ver->add_option("--report", cfg.report_path, "write the JSON report here");
    ver->add_option("--seed", cfg.seed, "probe RNG seed");
    ver->add_flag("--quick", cfg.quick, "smaller probe sets");
    add_common(ver);

    auto* pha = app.add_subcommand("phantom", "render a phantom JSON to a 16-bit PGM");
    pha->add_option("--phantom", cfg.phantom_path, "phantom JSON")->required();
    pha->add_option("--out", cfg.out_path, "output image path")->required();
    pha->add_option("--grid", cfg.grid_n, "image grid size n");
    pha->add_option("--delta", cfg.delta, "mask margin");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.got_subcommand(fwd)) return do_forward(cfg, false);
        if (app.got_subcommand(fwda)) return do_forward(cfg, true);
        if (app.got_subcommand(inv)) return do_invert(cfg, false);
        if (app.got_subcommand(inva)) return do_invert(cfg, true);
        if (app.got_subcommand(ver)) return do_verify(cfg);
        if (app.got_subcommand(pha)) return do_phantom(cfg);
    } catch (const NumericsError& e) {
        emit_error("numerical", e.what());
        return 3;
    } catch (const std::exception& e) {
        emit_error("validation", e.what());
        return 2;
    }
    return 2;
}
