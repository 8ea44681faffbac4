#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <cnsf/geometry.hpp>

namespace cnsf::cli {

// Flags shared by every subcommand.
struct Common {
    std::string geometry;
    std::string output;
    std::string projector = "cnsf";
    std::string threads = "auto";
    std::uint64_t seed = 0;
};

struct PhantomArgs {
    std::string kind = "shepp-logan";
    std::string variant = "original";
    int size = 128;
    double pixel_mm = 1.0;
    int row = -1; // pixel kind; -1 picks the center
    int col = -1;
    double value = 1.0;
};

struct ProjectArgs {
    std::string image;
    std::string pgm;
};

struct BackprojectArgs {
    std::string sino;
    int size = 0;
    double pixel_mm = 1.0;
};

struct CompareArgs {
    std::string against = "ref";
    std::string image; // empty: unit pixel at the rotation center
    double pixel_mm = 1.0;
    std::string pgm;
    double scale = 1.0;
};

struct ReconArgs {
    std::string sino;
    std::string truth;
    std::string config;
    std::string log;
    int size = 0;
    double pixel_mm = 1.0;
    bool precompute = false;
};

struct BenchArgs {
    std::vector<int> sizes{64, 128, 256, 512};
    int views = 360;
    int repeats = 1;
    bool large = false;
};

struct AdjointArgs {
    int size = 64;
    int views = 8;
    int trials = 10;
};

// Size -> geometry pairing of the scaling study (360 views over 360 degrees,
// 1 mm bins, tau = 1 mm). Sizes outside the table get d = 100 N / 64 and an
// odd detector about 3.2 N bins wide.
struct BenchSetup {
    int size;
    int n_s;
    double d;
};
BenchSetup bench_setup(int size);
FanBeamGeometry bench_geometry(int size, int views);

int resolve_thread_flag(const std::string &flag);

int run_phantom(const Common &common, const PhantomArgs &args);
int run_project(const Common &common, const ProjectArgs &args);
int run_backproject(const Common &common, const BackprojectArgs &args);
int run_compare(const Common &common, const CompareArgs &args);
int run_recon(const Common &common, const ReconArgs &args);
int run_bench(const Common &common, const BenchArgs &args);
int run_adjoint_check(const Common &common, const AdjointArgs &args);

} // namespace cnsf::cli
