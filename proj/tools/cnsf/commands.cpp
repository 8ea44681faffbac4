#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <memory>
#include <numbers>
#include <random>

#include <json.hpp>

#include <cnsf/errors.hpp>
#include <cnsf/io.hpp>
#include <cnsf/parallel.hpp>
#include <cnsf/phantom.hpp>
#include <cnsf/projector.hpp>
#include <cnsf/recon.hpp>

namespace cnsf::cli {

namespace {

using nlohmann::json;

void print_config(const std::string &command, const Common &common, json extra) {
    json cfg = {{"command", command},
                {"projector", common.projector},
                {"threads", resolve_thread_flag(common.threads)},
                {"seed", common.seed}};
    if (!common.output.empty())
        cfg["output"] = common.output;
    if (!common.geometry.empty())
        cfg["geometry"] = json::parse(geometry_to_json(load_geometry(common.geometry)));
    for (auto &[k, v] : extra.items())
        cfg[k] = v;
    std::cout << "resolved configuration:\n" << cfg.dump(2) << "\n";
}

FanBeamGeometry require_geometry(const Common &common) {
    if (common.geometry.empty())
        throw ValidationError("--geometry is required");
    return load_geometry(common.geometry);
}

void require_output(const Common &common) {
    if (common.output.empty())
        throw ValidationError("--output is required");
}

ExecutionOptions exec(const Common &common) { return {resolve_thread_flag(common.threads)}; }

ImageGrid read_image(const std::string &path) {
    const GridFile f = read_grid(path);
    if (f.kind != GridKind::image)
        throw ValidationError(path + " is not an image grid");
    return to_image(f);
}

Sinogram read_sinogram(const std::string &path, const FanBeamGeometry &g) {
    const GridFile f = read_grid(path);
    if (f.kind != GridKind::sinogram)
        throw ValidationError(path + " is not a sinogram grid");
    Sinogram y = to_sinogram(f);
    if (!y.matches(g))
        throw ValidationError("sinogram " + std::to_string(y.n_s) + "x" + std::to_string(y.n_views) +
                              " does not match the geometry");
    return y;
}

std::pair<double, double> value_range(const std::vector<double> &v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return {*lo, *hi > *lo ? *hi : *lo + 1.0};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace

int resolve_thread_flag(const std::string &flag) {
    if (flag == "auto")
        return resolve_threads(0);
    try {
        std::size_t used = 0;
        const int n = std::stoi(flag, &used);
        if (used == flag.size() && n >= 1)
            return n;
    } catch (const std::exception &) {
    }
    throw ValidationError("--threads must be a positive integer or 'auto', got '" + flag + "'");
}

BenchSetup bench_setup(int size) {
    static constexpr BenchSetup table[] = {{64, 205, 100},   {128, 409, 200},   {256, 815, 400},
                                           {512, 1627, 800}, {1024, 3250, 1600}, {2048, 6499, 3200}};
    if (size < 1)
        throw ValidationError("image size must be positive");
    for (const BenchSetup &b : table)
        if (b.size == size)
            return b;
    return {size, 2 * int(std::lround(1.6 * size)) + 1, 100.0 * size / 64.0};
}

FanBeamGeometry bench_geometry(int size, int views) {
    const BenchSetup b = bench_setup(size);
    return FanBeamGeometry::uniform(b.d, b.d, b.n_s, 1.0, 1.0, views);
}

int run_phantom(const Common &common, const PhantomArgs &a) {
    require_output(common);
    print_config("phantom", common,
                 {{"kind", a.kind}, {"variant", a.variant}, {"size", a.size}, {"pixel_mm", a.pixel_mm}});
    if (a.size < 1 || !(a.pixel_mm > 0))
        throw ValidationError("--size and --pixel-mm must be positive");

    ImageGrid img;
    if (a.kind == "shepp-logan") {
        if (a.variant != "original" && a.variant != "modified")
            throw ValidationError("--variant must be original or modified");
        img = shepp_logan(a.size, a.pixel_mm,
                          a.variant == "modified" ? SheppLoganVariant::modified : SheppLoganVariant::original);
    } else if (a.kind == "ones") {
        img = all_ones(a.size, a.pixel_mm);
    } else if (a.kind == "pixel") {
        const int i = a.row < 0 ? a.size / 2 : a.row;
        const int j = a.col < 0 ? a.size / 2 : a.col;
        img = single_pixel(a.size, a.pixel_mm, i, j, a.value);
    } else if (a.kind == "random") {
        std::mt19937_64 rng(common.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        img = ImageGrid(a.size, a.pixel_mm);
        for (double &c : img.c)
            c = u(rng);
    } else {
        throw ValidationError("unknown phantom kind '" + a.kind + "'");
    }
    write_grid(common.output, to_grid_file(img));
    std::cout << "wrote " << common.output << "\n";
    return 0;
}

int run_project(const Common &common, const ProjectArgs &a) {
    require_output(common);
    const FanBeamGeometry g = require_geometry(common);
    print_config("project", common, {{"image", a.image}});
    const ImageGrid img = read_image(a.image);
    const Projector proj(g, img.n, img.h, parse_model(common.projector), exec(common));

    const auto t0 = std::chrono::steady_clock::now();
    const Sinogram y = proj.forward(img);
    std::printf("forward projection: %.3f s\n", seconds_since(t0));

    write_grid(common.output, to_grid_file(y, g.delta_s));
    if (!a.pgm.empty()) {
        const auto [lo, hi] = value_range(y.values);
        export_pgm(a.pgm, y.values, y.n_s, y.n_views, lo, hi);
    }
    std::cout << "wrote " << common.output << "\n";
    return 0;
}

int run_backproject(const Common &common, const BackprojectArgs &a) {
    require_output(common);
    const FanBeamGeometry g = require_geometry(common);
    print_config("backproject", common, {{"sino", a.sino}, {"size", a.size}, {"pixel_mm", a.pixel_mm}});
    const Sinogram y = read_sinogram(a.sino, g);
    const Projector proj(g, a.size, a.pixel_mm, parse_model(common.projector), exec(common));

    const auto t0 = std::chrono::steady_clock::now();
    const ImageGrid img = proj.back(y);
    std::printf("back projection: %.3f s\n", seconds_since(t0));

    write_grid(common.output, to_grid_file(img));
    std::cout << "wrote " << common.output << "\n";
    return 0;
}

int run_compare(const Common &common, const CompareArgs &a) {
    require_output(common);
    const FanBeamGeometry g = require_geometry(common);
    print_config("compare", common,
                 {{"against", a.against},
                  {"image", a.image.empty() ? json("unit pixel at the rotation center") : json(a.image)},
                  {"pixel_mm", a.pixel_mm},
                  {"pgm", a.pgm},
                  {"scale", a.scale}});
    const ImageGrid img = a.image.empty() ? ImageGrid(1, a.pixel_mm, 1.0) : read_image(a.image);
    const Model model = parse_model(common.projector);
    const Model against = parse_model(a.against);

    const Sinogram y = Projector(g, img.n, img.h, model, exec(common)).forward(img);
    const Sinogram y_ref = Projector(g, img.n, img.h, against, exec(common)).forward(img);

    CsvTable table{{"view", "angle_deg", "max_abs_error"}, {}};
    std::vector<double> diff(y.values.size());
    for (std::size_t k = 0; k < diff.size(); ++k)
        diff[k] = y.values[k] - y_ref.values[k];
    double worst = 0.0;
    for (int v = 0; v < g.n_views(); ++v) {
        double e = 0.0;
        for (int b = 0; b < g.n_s; ++b)
            e = std::max(e, std::abs(diff[std::size_t(b) * g.n_views() + v]));
        worst = std::max(worst, e);
        table.rows.push_back({double(v), g.view_angles[v] * 180.0 / std::numbers::pi, e});
    }
    export_csv(common.output, table);

    if (!a.pgm.empty()) {
        // (model - against) * scale, with [-1, 1] spanning the gray range
        std::vector<double> scaled(diff.size());
        for (std::size_t k = 0; k < diff.size(); ++k)
            scaled[k] = diff[k] * a.scale;
        export_pgm(a.pgm, scaled, g.n_s, g.n_views(), -1.0, 1.0);
    }
    std::printf("max abs error %s vs %s: %.6e over %d views\n", std::string(to_string(model)).c_str(),
                std::string(to_string(against)).c_str(), worst, g.n_views());
    std::cout << "wrote " << common.output << "\n";
    return 0;
}

int run_recon(const Common &common, const ReconArgs &a) {
    require_output(common);
    const FanBeamGeometry g = require_geometry(common);
    const AsdPocsConfig cfg = a.config.empty() ? AsdPocsConfig{} : load_recon_config(a.config);
    cfg.validate();
    print_config("recon", common,
                 {{"sino", a.sino},
                  {"truth", a.truth},
                  {"size", a.size},
                  {"pixel_mm", a.pixel_mm},
                  {"precompute", a.precompute},
                  {"asd_pocs", json::parse(recon_config_to_json(cfg))}});

    const Sinogram y = read_sinogram(a.sino, g);
    ImageGrid truth;
    int n = a.size;
    double h = a.pixel_mm;
    if (!a.truth.empty()) {
        truth = read_image(a.truth);
        n = truth.n;
        h = truth.h;
    }
    if (n < 1)
        throw ValidationError("--size is required without --truth");

    const Projector proj(g, n, h, parse_model(common.projector), exec(common));
    std::unique_ptr<PrecomputedProjector> cached;
    const SystemOperator *op = &proj;
    if (a.precompute) {
        cached = std::make_unique<PrecomputedProjector>(proj);
        op = cached.get();
    }

    const auto t0 = std::chrono::steady_clock::now();
    const ReconResult r = asd_pocs(y, *op, cfg);
    std::printf("asd-pocs: %d iterations in %.2f s\n", cfg.n_iterations, seconds_since(t0));

    write_grid(common.output, to_grid_file(r.image));
    if (!a.log.empty()) {
        CsvTable log{{"iteration", "data_residual", "tv_value", "beta", "alpha"}, {}};
        for (const IterationRecord &rec : r.log)
            log.rows.push_back({double(rec.iteration), rec.data_residual, rec.tv_value, rec.beta, rec.alpha});
        export_csv(a.log, log);
    }
    if (!a.truth.empty())
        std::printf("SNR %.4f dB\n", snr_db(r.image, truth));
    std::cout << "wrote " << common.output << "\n";
    return 0;
}

int run_bench(const Common &common, const BenchArgs &a) {
    for (int n : a.sizes)
        if (n > 1024 && !a.large)
            throw ValidationError("size " + std::to_string(n) + " needs --large");
    if (a.views < 1 || a.repeats < 1)
        throw ValidationError("--views and --repeats must be positive");
    print_config("bench", common, {{"sizes", a.sizes}, {"views", a.views}, {"repeats", a.repeats}});

    const Model model = parse_model(common.projector);
    CsvTable table{{"size", "n_s", "d_po", "d_so", "n_views", "fp_seconds", "bp_seconds"}, {}};
    std::printf("%6s %6s %8s %8s %12s %12s\n", "size", "n_s", "d_po", "n_views", "fp_seconds", "bp_seconds");
    struct Case {
        int n;
        ImageGrid image;
        Projector proj;
        double fp = std::numeric_limits<double>::infinity();
        double bp = std::numeric_limits<double>::infinity();
    };
    std::vector<Case> cases;
    cases.reserve(a.sizes.size());
    for (int n : a.sizes)
        cases.push_back({n, shepp_logan(n, 1.0), Projector(bench_geometry(n, a.views), n, 1.0, model, exec(common))});
    // Repeats cycle over all sizes, so a slow stretch on a shared machine
    // does not land on one size only. The first pass is an untimed warm-up.
    for (int r = 0; r <= a.repeats; ++r) {
        for (Case &c : cases) {
            auto t0 = std::chrono::steady_clock::now();
            const Sinogram y = c.proj.forward(c.image);
            const double fp = seconds_since(t0);
            t0 = std::chrono::steady_clock::now();
            const ImageGrid back = c.proj.back(y);
            const double bp = seconds_since(t0);
            if (r > 0) {
                c.fp = std::min(c.fp, fp);
                c.bp = std::min(c.bp, bp);
            }
        }
    }
    for (const Case &c : cases) {
        const BenchSetup b = bench_setup(c.n);
        table.rows.push_back({double(c.n), double(b.n_s), b.d, b.d, double(a.views), c.fp, c.bp});
        std::printf("%6d %6d %8g %8d %12.4f %12.4f\n", c.n, b.n_s, b.d, a.views, c.fp, c.bp);
    }
    if (!common.output.empty()) {
        export_csv(common.output, table);
        std::cout << "wrote " << common.output << "\n";
    }
    return 0;
}

int run_adjoint_check(const Common &common, const AdjointArgs &a) {
    if (a.views < 1 || a.trials < 1)
        throw ValidationError("--views and --trials must be positive");
    const FanBeamGeometry g = common.geometry.empty() ? bench_geometry(a.size, a.views) : load_geometry(common.geometry);
    print_config("adjoint-check", common,
                 {{"size", a.size},
                  {"views", g.n_views()},
                  {"trials", a.trials},
                  {"resolved_geometry", json::parse(geometry_to_json(g))}});

    const Projector proj(g, a.size, 1.0, parse_model(common.projector), exec(common));
    std::mt19937_64 rng(common.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int t = 0; t < a.trials; ++t) {
        ImageGrid c(a.size, 1.0);
        for (double &v : c.c)
            v = u(rng);
        Sinogram y(g);
        for (double &v : y.values)
            v = u(rng);
        const double lhs = inner_product(proj.forward(c).values, y.values);
        const double rhs = inner_product(c.c, proj.back(y).c);
        worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
    }
    const bool pass = worst < 1e-10;
    std::printf("%s max_defect < 1e-10 (observed %.3e)\n", pass ? "PASS" : "FAIL", worst);
    if (!common.output.empty()) {
        export_csv(common.output, CsvTable{{"trials", "max_defect"}, {{double(a.trials), worst}}});
        std::cout << "wrote " << common.output << "\n";
    }
    return pass ? 0 : 2;
}

} // namespace cnsf::cli
