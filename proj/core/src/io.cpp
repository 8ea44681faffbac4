#include "cnsf/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cnsf/errors.hpp"

namespace cnsf {

namespace {

using json = nlohmann::json;

template <class T>
void put_le(std::vector<std::uint8_t> &out, T value) {
    for (std::size_t k = 0; k < sizeof(T); ++k)
        out.push_back(static_cast<std::uint8_t>((value >> (8 * k)) & 0xFF));
}

template <class T>
T get_le(std::span<const std::uint8_t> bytes, std::size_t offset) {
    T value = 0;
    for (std::size_t k = 0; k < sizeof(T); ++k)
        value |= static_cast<T>(bytes[offset + k]) << (8 * k);
    return value;
}

std::ofstream open_output(const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ValidationError("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream &out, const std::filesystem::path &path) {
    out.flush();
    if (!out)
        throw ValidationError("failed writing '" + path.string() + "'");
}

void reject_unknown(const json &doc, std::initializer_list<const char *> allowed,
                    const char *what) {
    if (!doc.is_object())
        throw ValidationError(std::string(what) + " must be a JSON object");
    std::set<std::string> known(allowed.begin(), allowed.end());
    for (const auto &item : doc.items())
        if (!known.count(item.key()))
            throw ValidationError(std::string(what) + ": unknown key '" + item.key() + "'");
}

json parse_json(std::string_view text, const char *what) {
    try {
        return json::parse(text);
    } catch (const json::exception &e) {
        throw ValidationError(std::string(what) + ": " + e.what());
    }
}

template <class T>
T required(const json &doc, const char *key, const char *what) {
    if (!doc.contains(key))
        throw ValidationError(std::string(what) + ": missing key '" + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ValidationError(std::string(what) + ": bad value for '" + key + "': " + e.what());
    }
}

template <class T>
void optional(const json &doc, const char *key, T &target, const char *what) {
    if (doc.contains(key))
        target = required<T>(doc, key, what);
}

} // namespace

std::vector<std::uint8_t> encode_grid(const GridFile &grid) {
    if (grid.payload.size() != std::size_t(grid.rows) * grid.cols)
        throw ValidationError("grid payload length does not match rows x cols");
    std::vector<std::uint8_t> out;
    out.reserve(kGridHeaderBytes + 8 * grid.payload.size());
    for (char ch : {'C', 'N', 'S', 'F'})
        out.push_back(static_cast<std::uint8_t>(ch));
    put_le<std::uint32_t>(out, kGridVersion);
    out.push_back(static_cast<std::uint8_t>(grid.kind));
    put_le<std::uint32_t>(out, grid.rows);
    put_le<std::uint32_t>(out, grid.cols);
    put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(grid.pixel_size_mm));
    for (double v : grid.payload)
        put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(v));
    return out;
}

GridFile decode_grid(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < kGridHeaderBytes)
        throw FormatError("grid file truncated: header needs " + std::to_string(kGridHeaderBytes) +
                          " bytes, got " + std::to_string(bytes.size()));
    if (std::memcmp(bytes.data(), "CNSF", 4) != 0)
        throw FormatError("not a grid file: bad magic");
    const auto version = get_le<std::uint32_t>(bytes, 4);
    if (version != kGridVersion)
        throw FormatError("unsupported grid file version " + std::to_string(version));
    const std::uint8_t kind = bytes[8];
    if (kind > 1)
        throw FormatError("unknown grid kind " + std::to_string(kind));
    GridFile grid;
    grid.kind = static_cast<GridKind>(kind);
    grid.rows = get_le<std::uint32_t>(bytes, 9);
    grid.cols = get_le<std::uint32_t>(bytes, 13);
    grid.pixel_size_mm = std::bit_cast<double>(get_le<std::uint64_t>(bytes, 17));
    const std::size_t count = std::size_t(grid.rows) * grid.cols;
    const std::size_t expected = kGridHeaderBytes + 8 * count;
    if (bytes.size() != expected)
        throw FormatError("grid file length " + std::to_string(bytes.size()) + " does not match " +
                          std::to_string(expected) + " bytes for " + std::to_string(grid.rows) +
                          "x" + std::to_string(grid.cols));
    grid.payload.resize(count);
    for (std::size_t k = 0; k < count; ++k)
        grid.payload[k] =
            std::bit_cast<double>(get_le<std::uint64_t>(bytes, kGridHeaderBytes + 8 * k));
    return grid;
}

void write_grid(const std::filesystem::path &path, const GridFile &grid) {
    const std::vector<std::uint8_t> bytes = encode_grid(grid);
    std::ofstream out = open_output(path);
    out.write(reinterpret_cast<const char *>(bytes.data()), std::streamsize(bytes.size()));
    finish(out, path);
}

GridFile read_grid(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ValidationError("cannot open '" + path.string() + "'");
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                          std::istreambuf_iterator<char>());
    try {
        return decode_grid(bytes);
    } catch (const FormatError &e) {
        throw FormatError(path.string() + ": " + e.what());
    }
}

GridFile to_grid_file(const ImageGrid &image) {
    return {GridKind::image, std::uint32_t(image.n), std::uint32_t(image.n), image.h, image.c};
}

GridFile to_grid_file(const Sinogram &sino, double delta_s) {
    return {GridKind::sinogram, std::uint32_t(sino.n_s), std::uint32_t(sino.n_views), delta_s,
            sino.values};
}

ImageGrid to_image(const GridFile &grid) {
    if (grid.kind != GridKind::image)
        throw FormatError("expected an image grid file, found a sinogram");
    if (grid.rows != grid.cols)
        throw FormatError("image grid must be square");
    ImageGrid img(int(grid.rows), grid.pixel_size_mm);
    img.c = grid.payload;
    return img;
}

Sinogram to_sinogram(const GridFile &grid) {
    if (grid.kind != GridKind::sinogram)
        throw FormatError("expected a sinogram grid file, found an image");
    Sinogram sino(int(grid.rows), int(grid.cols));
    sino.values = grid.payload;
    return sino;
}

void export_pgm(const std::filesystem::path &path, std::span<const double> values, int rows,
                int cols, double min, double max) {
    if (rows < 1 || cols < 1 || values.size() != std::size_t(rows) * cols)
        throw ValidationError("export_pgm: values do not match rows x cols");
    if (!std::isfinite(min) || !std::isfinite(max) || !(max > min))
        throw ValidationError("export_pgm: need finite min < max");
    for (double v : values)
        if (!std::isfinite(v))
            throw ValidationError("export_pgm: non-finite value in image");
    std::ofstream out = open_output(path);
    out << "P5\n" << cols << ' ' << rows << "\n65535\n";
    std::vector<char> samples;
    samples.reserve(2 * values.size());
    for (double v : values) {
        const double t = std::clamp((v - min) / (max - min), 0.0, 1.0);
        const auto q = static_cast<std::uint16_t>(std::lround(t * 65535.0));
        samples.push_back(static_cast<char>(q >> 8));
        samples.push_back(static_cast<char>(q & 0xFF));
    }
    out.write(samples.data(), std::streamsize(samples.size()));
    finish(out, path);
}

void export_csv(const std::filesystem::path &path, const CsvTable &table) {
    std::ofstream out = open_output(path);
    for (std::size_t k = 0; k < table.header.size(); ++k)
        out << (k ? "," : "") << table.header[k];
    out << '\n';
    char buf[32];
    for (const auto &row : table.rows) {
        if (row.size() != table.header.size())
            throw ValidationError("export_csv: row width does not match header");
        for (std::size_t k = 0; k < row.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", row[k]);
            out << (k ? "," : "") << buf;
        }
        out << '\n';
    }
    finish(out, path);
}

FanBeamGeometry geometry_from_json(std::string_view text) {
    constexpr const char *what = "geometry";
    const json doc = parse_json(text, what);
    reject_unknown(doc,
                   {"d_po", "d_so", "n_s", "delta_s", "tau", "n_views", "angles_deg",
                    "angle_span_deg"},
                   what);
    FanBeamGeometry g;
    g.d_po = required<double>(doc, "d_po", what);
    g.d_so = required<double>(doc, "d_so", what);
    g.n_s = required<int>(doc, "n_s", what);
    g.delta_s = required<double>(doc, "delta_s", what);
    g.tau = required<double>(doc, "tau", what);
    constexpr double deg = std::numbers::pi / 180.0;
    if (doc.contains("angles_deg")) {
        if (doc.contains("angle_span_deg"))
            throw ValidationError("geometry: angles_deg and angle_span_deg are exclusive");
        const auto angles = required<std::vector<double>>(doc, "angles_deg", what);
        if (doc.contains("n_views") && required<int>(doc, "n_views", what) != int(angles.size()))
            throw ValidationError("geometry: n_views does not match the angles_deg list");
        for (double a : angles)
            g.view_angles.push_back(a * deg);
    } else {
        const int n_views = required<int>(doc, "n_views", what);
        double span = 360.0;
        optional(doc, "angle_span_deg", span, what);
        if (n_views < 1)
            throw ValidationError("geometry: n_views must be positive");
        for (int k = 0; k < n_views; ++k)
            g.view_angles.push_back(span * k / n_views * deg);
    }
    g.validate();
    return g;
}

std::string geometry_to_json(const FanBeamGeometry &geometry) {
    json doc;
    doc["d_po"] = geometry.d_po;
    doc["d_so"] = geometry.d_so;
    doc["n_s"] = geometry.n_s;
    doc["delta_s"] = geometry.delta_s;
    doc["tau"] = geometry.tau;
    doc["n_views"] = geometry.n_views();
    std::vector<double> deg;
    for (double a : geometry.view_angles)
        deg.push_back(a * 180.0 / std::numbers::pi);
    doc["angles_deg"] = deg;
    return doc.dump(2);
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

FanBeamGeometry load_geometry(const std::filesystem::path &path) {
    try {
        return geometry_from_json(read_text_file(path));
    } catch (const ValidationError &e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

AsdPocsConfig recon_config_from_json(std::string_view text) {
    constexpr const char *what = "recon config";
    const json doc = parse_json(text, what);
    reject_unknown(doc,
                   {"n_iterations", "beta0", "beta_red", "n_tv", "alpha", "alpha_red", "r_max",
                    "nonneg", "n_subsets"},
                   what);
    AsdPocsConfig c;
    optional(doc, "n_iterations", c.n_iterations, what);
    optional(doc, "beta0", c.beta0, what);
    optional(doc, "beta_red", c.beta_red, what);
    optional(doc, "n_tv", c.n_tv, what);
    optional(doc, "alpha", c.alpha, what);
    optional(doc, "alpha_red", c.alpha_red, what);
    optional(doc, "r_max", c.r_max, what);
    optional(doc, "nonneg", c.nonneg, what);
    optional(doc, "n_subsets", c.n_subsets, what);
    c.validate();
    return c;
}

std::string recon_config_to_json(const AsdPocsConfig &c) {
    json doc = {{"n_iterations", c.n_iterations}, {"beta0", c.beta0}, {"beta_red", c.beta_red},
                {"n_tv", c.n_tv},                 {"alpha", c.alpha}, {"alpha_red", c.alpha_red},
                {"r_max", c.r_max},               {"nonneg", c.nonneg},
                {"n_subsets", c.n_subsets}};
    return doc.dump(2);
}

AsdPocsConfig load_recon_config(const std::filesystem::path &path) {
    try {
        return recon_config_from_json(read_text_file(path));
    } catch (const ValidationError &e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

} // namespace cnsf
