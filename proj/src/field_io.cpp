#include "besovflow/field_io.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace besovflow {
namespace {

constexpr char kMagic[4] = {'P', 'F', 'L', 'D'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
void put_f64(std::ostream& os, double v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

bool get_u32(std::istream& is, std::uint32_t& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return is.gcount() == sizeof v;
}
bool get_f64(std::istream& is, double& v) {
    is.read(reinterpret_cast<char*>(&v), sizeof v);
    return is.gcount() == sizeof v;
}

}  // namespace

void write_field(const Field& f, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("write_field: cannot open " + path.string());
    const Grid& g = f.grid();
    os.write(kMagic, 4);
    put_u32(os, kVersion);
    put_u32(os, static_cast<std::uint32_t>(g.dim));
    for (int a = 0; a < g.dim; ++a) put_u32(os, static_cast<std::uint32_t>(g.n[a]));
    put_u32(os, static_cast<std::uint32_t>(f.components()));
    for (int a = 0; a < g.dim; ++a) put_f64(os, g.period[a]);
    os.write(reinterpret_cast<const char*>(f.data().data()),
             static_cast<std::streamsize>(f.data().size() * sizeof(double)));
    if (!os) throw IoError("write_field: write failed for " + path.string());
}

Field read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("read_field: cannot open " + path.string());

    char magic[4];
    is.read(magic, 4);
    if (is.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0)
        throw BadMagicError("read_field: bad magic in " + path.string());

    std::uint32_t version = 0, dim = 0, components = 0;
    if (!get_u32(is, version)) throw TruncatedPayloadError("read_field: truncated header");
    if (version != kVersion)
        throw DimensionMismatchError("read_field: unsupported version " + std::to_string(version));
    if (!get_u32(is, dim)) throw TruncatedPayloadError("read_field: truncated header");
    if (dim != 2 && dim != 3)
        throw DimensionMismatchError("read_field: dimension " + std::to_string(dim) +
                                     " not supported");

    std::vector<int> sizes(dim);
    for (auto& s : sizes) {
        std::uint32_t v = 0;
        if (!get_u32(is, v)) throw TruncatedPayloadError("read_field: truncated header");
        if (v < 8 || v > (1u << 24) || !is_pow2(v))
            throw DimensionMismatchError("read_field: invalid axis size " + std::to_string(v));
        s = static_cast<int>(v);
    }
    if (!get_u32(is, components)) throw TruncatedPayloadError("read_field: truncated header");
    if (components < 1 || components > 64)
        throw DimensionMismatchError("read_field: invalid component count " +
                                     std::to_string(components));

    std::vector<double> periods(dim);
    for (auto& p : periods) {
        if (!get_f64(is, p)) throw TruncatedPayloadError("read_field: truncated header");
        if (!(p > 0.0)) throw DimensionMismatchError("read_field: invalid period");
    }

    Grid g = Grid::make(sizes, periods);
    Field f(g, static_cast<int>(components));
    is.read(reinterpret_cast<char*>(f.data().data()),
            static_cast<std::streamsize>(f.data().size() * sizeof(double)));
    if (static_cast<std::size_t>(is.gcount()) != f.data().size() * sizeof(double))
        throw TruncatedPayloadError("read_field: truncated payload in " + path.string());
    return f;
}

}  // namespace besovflow
