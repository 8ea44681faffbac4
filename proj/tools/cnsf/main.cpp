// cnsf: projector experiments from the command line.
//
// Exit codes: 0 success, 1 invalid input (flags, files, geometry), 2 computation failure.

#include <cstdio>
#include <exception>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include <cnsf/errors.hpp>

#include "commands.hpp"

using namespace cnsf::cli;

namespace {

void add_common(CLI::App *cmd, Common &c) {
    cmd->add_option("--geometry", c.geometry, "geometry JSON file")->check(CLI::ExistingFile);
    cmd->add_option("--output", c.output, "output path");
    cmd->add_option("--projector", c.projector, "cnsf | ref | area | parallel")->capture_default_str();
    cmd->add_option("--threads", c.threads, "worker count or 'auto'")->capture_default_str();
    cmd->add_option("--seed", c.seed, "seed for random inputs")->capture_default_str();
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Fan-beam box-spline projectors: phantoms, projection, comparison, reconstruction"};
    app.require_subcommand(1);

    Common common;
    std::function<int()> run;

    PhantomArgs ph;
    auto *phantom = app.add_subcommand("phantom", "write a test image");
    add_common(phantom, common);
    phantom->add_option("--kind", ph.kind, "shepp-logan | ones | pixel | random")->capture_default_str();
    phantom->add_option("--variant", ph.variant, "original | modified (shepp-logan)")->capture_default_str();
    phantom->add_option("--size", ph.size, "image side in pixels")->capture_default_str();
    phantom->add_option("--pixel-mm", ph.pixel_mm, "pixel size in mm")->capture_default_str();
    phantom->add_option("--row", ph.row, "pixel kind: row, default center");
    phantom->add_option("--col", ph.col, "pixel kind: column, default center");
    phantom->add_option("--value", ph.value, "pixel kind: value")->capture_default_str();
    phantom->callback([&] { run = [&] { return run_phantom(common, ph); }; });

    ProjectArgs pr;
    auto *project = app.add_subcommand("project", "forward project an image");
    add_common(project, common);
    project->add_option("--image", pr.image, "image grid file")->required()->check(CLI::ExistingFile);
    project->add_option("--pgm", pr.pgm, "also export the sinogram as PGM");
    project->callback([&] { run = [&] { return run_project(common, pr); }; });

    BackprojectArgs bp;
    auto *backproject = app.add_subcommand("backproject", "apply the adjoint to a sinogram");
    add_common(backproject, common);
    backproject->add_option("--sino", bp.sino, "sinogram grid file")->required()->check(CLI::ExistingFile);
    backproject->add_option("--size", bp.size, "image side in pixels")->required();
    backproject->add_option("--pixel-mm", bp.pixel_mm, "pixel size in mm")->capture_default_str();
    backproject->callback([&] { run = [&] { return run_backproject(common, bp); }; });

    CompareArgs cm;
    auto *compare = app.add_subcommand("compare", "per-view max error of --projector against another model");
    add_common(compare, common);
    compare->add_option("--against", cm.against, "model to compare against")->capture_default_str();
    compare->add_option("--image", cm.image, "image grid; default is one pixel at the center")
        ->check(CLI::ExistingFile);
    compare->add_option("--pixel-mm", cm.pixel_mm, "pixel size for the single-pixel default")
        ->capture_default_str();
    compare->add_option("--pgm", cm.pgm, "error map output, (model - against) * scale over [-1, 1]");
    compare->add_option("--scale", cm.scale, "error map scale")->capture_default_str();
    compare->callback([&] { run = [&] { return run_compare(common, cm); }; });

    ReconArgs rc;
    auto *recon = app.add_subcommand("recon", "ASD-POCS reconstruction");
    add_common(recon, common);
    recon->add_option("--sino", rc.sino, "sinogram grid file")->required()->check(CLI::ExistingFile);
    recon->add_option("--truth", rc.truth, "ground truth image, enables SNR")->check(CLI::ExistingFile);
    recon->add_option("--config", rc.config, "ASD-POCS JSON")->check(CLI::ExistingFile);
    recon->add_option("--log", rc.log, "per-iteration CSV log");
    recon->add_option("--size", rc.size, "image side when no --truth is given");
    recon->add_option("--pixel-mm", rc.pixel_mm, "pixel size when no --truth is given")->capture_default_str();
    recon->add_flag("--precompute", rc.precompute, "cache the projector weights first");
    recon->callback([&] { run = [&] { return run_recon(common, rc); }; });

    BenchArgs bn;
    auto *bench = app.add_subcommand("bench", "FP/BP wall time per image size");
    add_common(bench, common);
    bench->add_option("--sizes", bn.sizes, "image sides")->delimiter(',')->capture_default_str();
    bench->add_option("--views", bn.views, "views over 360 degrees")->capture_default_str();
    bench->add_option("--repeats", bn.repeats, "timings per size, best kept")->capture_default_str();
    bench->add_flag("--large", bn.large, "allow sizes above 1024");
    bench->callback([&] { run = [&] { return run_bench(common, bn); }; });

    AdjointArgs ad;
    auto *adjoint = app.add_subcommand("adjoint-check", "randomized <Ac, y> = <c, A^T y> check");
    add_common(adjoint, common);
    adjoint->add_option("--size", ad.size, "image side")->capture_default_str();
    adjoint->add_option("--views", ad.views, "views when no --geometry is given")->capture_default_str();
    adjoint->add_option("--trials", ad.trials, "random pairs")->capture_default_str();
    adjoint->callback([&] { run = [&] { return run_adjoint_check(common, ad); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return 1;
    }

    try {
        return run();
    } catch (const cnsf::ValidationError &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "computation failed: %s\n", e.what());
        return 2;
    }
}
