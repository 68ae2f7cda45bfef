#include "rf2d/snapshot_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rf2d {

namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <class T>
void put_le(std::string& out, T v) {
    unsigned char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    out.append(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
    unsigned char buf[sizeof(T)];
    in.read(reinterpret_cast<char*>(buf), sizeof(T));
    if (!in) throw std::runtime_error("snapshot: truncated file");
    if constexpr (std::endian::native == std::endian::big) std::reverse(buf, buf + sizeof(T));
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const ConformalSurface& s) {
    std::string blob;
    blob.reserve(17 + 8 * s.node_count());
    blob.append("RF2D", 4);
    put_le<std::uint32_t>(blob, kSnapshotFormatVersion);
    blob.push_back(static_cast<char>(static_cast<std::uint8_t>(s.base->kind)));
    put_le<std::uint32_t>(blob, s.base->resolution);
    put_le<double>(blob, s.time_stamp);
    for (double v : s.phi) put_le<double>(blob, v);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("snapshot: cannot open " + path.string());
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) throw std::runtime_error("snapshot: write failed for " + path.string());
}

ConformalSurface read_snapshot(const std::filesystem::path& path,
                               std::shared_ptr<const BaseSurface> base) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("snapshot: cannot open " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "RF2D", 4) != 0)
        throw std::runtime_error("snapshot: bad magic in " + path.string());
    const auto version = get_le<std::uint32_t>(in);
    if (version != kSnapshotFormatVersion)
        throw std::runtime_error("snapshot: unsupported format version");
    const auto kind_byte = get_le<std::uint8_t>(in);
    if (kind_byte > 1) throw std::runtime_error("snapshot: bad surface kind");
    const auto kind = static_cast<SurfaceKind>(kind_byte);
    const auto resolution = get_le<std::uint32_t>(in);
    const double time_stamp = get_le<double>(in);
    if (!base || base->kind != kind || base->resolution != resolution)
        base = BaseSurface::make(kind, resolution);
    Field phi(base->node_count);
    for (auto& v : phi) v = get_le<double>(in);
    return ConformalSurface(std::move(base), std::move(phi), time_stamp);
}

std::string snapshot_filename(double time_stamp) {
    const long long us = std::llround(time_stamp * 1e6);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "t_%012lld.rf2d", us);
    return buf;
}

}  // namespace rf2d
