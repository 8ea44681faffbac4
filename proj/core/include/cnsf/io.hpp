#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cnsf/geometry.hpp"
#include "cnsf/image.hpp"
#include "cnsf/recon.hpp"

namespace cnsf {

/*
 * Grid file layout, all integers and floats little-endian:
 *
 *   offset  size  field
 *   0       4     magic "CNSF"
 *   4       4     version (u32, = 1)
 *   8       1     kind (u8, 0 = image, 1 = sinogram)
 *   9       4     rows (u32)
 *   13      4     cols (u32)
 *   17      8     pixel size in mm (f64; detector spacing for sinograms)
 *   25      8*rows*cols  payload (f64, row-major)
 */
enum class GridKind : std::uint8_t { image = 0, sinogram = 1 };

inline constexpr std::uint32_t kGridVersion = 1;
inline constexpr std::size_t kGridHeaderBytes = 25;

struct GridFile {
    GridKind kind = GridKind::image;
    std::uint32_t rows = 0;
    std::uint32_t cols = 0;
    double pixel_size_mm = 0.0;
    std::vector<double> payload;
};

std::vector<std::uint8_t> encode_grid(const GridFile &grid);
/// Throws FormatError on bad magic, version, kind, or length.
GridFile decode_grid(std::span<const std::uint8_t> bytes);

void write_grid(const std::filesystem::path &path, const GridFile &grid);
GridFile read_grid(const std::filesystem::path &path);

GridFile to_grid_file(const ImageGrid &image);
GridFile to_grid_file(const Sinogram &sino, double delta_s);
ImageGrid to_image(const GridFile &grid);
Sinogram to_sinogram(const GridFile &grid);

/// Binary 16-bit PGM (P5, big-endian samples); [min, max] maps linearly to [0, 65535], clamped.
void export_pgm(const std::filesystem::path &path, std::span<const double> values, int rows,
                int cols, double min, double max);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Header line then one line per row; numbers written with round-trip precision.
void export_csv(const std::filesystem::path &path, const CsvTable &table);

/**
 * Geometry JSON: d_po, d_so (mm), n_s, delta_s, tau (mm), and either
 * n_views (uniform over angle_span_deg, default 360) or an explicit
 * angles_deg list. Unknown keys are rejected.
 */
FanBeamGeometry geometry_from_json(std::string_view text);
std::string geometry_to_json(const FanBeamGeometry &geometry);
FanBeamGeometry load_geometry(const std::filesystem::path &path);

/// ASD-POCS parameters; every key optional, unknown keys rejected.
AsdPocsConfig recon_config_from_json(std::string_view text);
std::string recon_config_to_json(const AsdPocsConfig &config);
AsdPocsConfig load_recon_config(const std::filesystem::path &path);

std::string read_text_file(const std::filesystem::path &path);

} // namespace cnsf
