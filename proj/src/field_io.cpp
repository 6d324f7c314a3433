#include "macflow/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; add byte swapping for this platform");

namespace macflow {

namespace {

constexpr char kMagic[4] = {'M', 'A', 'C', 'F'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), 4);
}

std::uint32_t get_u32(std::istream& is, const char* what) {
    std::uint32_t v = 0;
    if (!is.read(reinterpret_cast<char*>(&v), 4))
        throw std::runtime_error(std::string("field file truncated in header (") + what + ")");
    return v;
}

} // namespace

void write_field(const MatrixField& f, const std::string& path) {
    if (!f.all_finite()) throw std::invalid_argument("write_field: non-finite field");
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("write_field: cannot open " + path);
    os.write(kMagic, 4);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(f.nx));
    put_u32(os, static_cast<std::uint32_t>(f.ny));
    put_u32(os, static_cast<std::uint32_t>(f.m1));
    put_u32(os, static_cast<std::uint32_t>(f.m2));
    os.write(reinterpret_cast<const char*>(f.data.data()),
             static_cast<std::streamsize>(f.data.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write_field: write failed for " + path);
}

MatrixField read_field(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field: cannot open " + path);
    char magic[4];
    if (!is.read(magic, 4)) throw std::runtime_error("read_field: bad magic (file too short)");
    if (std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("read_field: bad magic, not a field file");
    const std::uint32_t version = get_u32(is, "version");
    if (version != kVersion)
        throw std::runtime_error("read_field: unsupported version " + std::to_string(version));
    const std::uint32_t nx = get_u32(is, "nx");
    const std::uint32_t ny = get_u32(is, "ny");
    const std::uint32_t m1 = get_u32(is, "m1");
    const std::uint32_t m2 = get_u32(is, "m2");
    MatrixField f(static_cast<int>(nx), static_cast<int>(ny), static_cast<int>(m1),
                  static_cast<int>(m2));
    if (!is.read(reinterpret_cast<char*>(f.data.data()),
                 static_cast<std::streamsize>(f.data.size() * sizeof(double))))
        throw std::runtime_error("read_field: payload truncated");
    return f;
}

void write_series_csv(const std::vector<SeriesRecord>& series, const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("write_series_csv: cannot open " + path);
    os << "step,t,sup_frob,energy_total,energy_grad,energy_pot,alpha_min,u31_sup\n";
    char buf[512];
    for (const SeriesRecord& r : series) {
        int n = std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,",
                              r.step, r.t, r.sup_frob, r.energy_total, r.energy_grad,
                              r.energy_pot, r.alpha_min);
        os.write(buf, n);
        if (r.u31_sup) {
            n = std::snprintf(buf, sizeof(buf), "%.17g", *r.u31_sup);
            os.write(buf, n);
        }
        os.put('\n');
    }
    if (!os) throw std::runtime_error("write_series_csv: write failed for " + path);
}

void write_contours_csv(const std::vector<Polyline>& lines, const std::string& path) {
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw std::runtime_error("write_contours_csv: cannot open " + path);
    os << "polyline_id,x,y\n";
    char buf[256];
    for (std::size_t id = 0; id < lines.size(); ++id)
        for (const auto& p : lines[id].pts) {
            int n = std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", id, p[0], p[1]);
            os.write(buf, n);
        }
    if (!os) throw std::runtime_error("write_contours_csv: write failed for " + path);
}

} // namespace macflow
