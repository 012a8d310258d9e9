#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "resire/errors.hpp"
#include "resire/io.hpp"

namespace resire {

namespace {

// Byte offsets into the 1024-byte header.
constexpr std::size_t kOffNx = 0, kOffMode = 12, kOffStart = 16, kOffGrid = 28, kOffCell = 40, kOffAngles = 52,
                      kOffAxes = 64, kOffDmin = 76, kOffDmax = 80, kOffDmean = 84, kOffIspg = 88, kOffNsymbt = 92,
                      kOffExttyp = 104, kOffNversion = 108, kOffOrigin = 196, kOffMap = 208, kOffMachst = 212,
                      kOffRms = 216, kOffNlabl = 220, kOffLabels = 224;

void put_u32(std::uint8_t* dst, std::uint32_t v) {
    dst[0] = static_cast<std::uint8_t>(v);
    dst[1] = static_cast<std::uint8_t>(v >> 8);
    dst[2] = static_cast<std::uint8_t>(v >> 16);
    dst[3] = static_cast<std::uint8_t>(v >> 24);
}
void put_i32(std::uint8_t* dst, std::int32_t v) { put_u32(dst, static_cast<std::uint32_t>(v)); }
void put_f32(std::uint8_t* dst, float v) { put_u32(dst, std::bit_cast<std::uint32_t>(v)); }

class HeaderReader {
public:
    HeaderReader(const std::uint8_t* bytes, bool big_endian) : b_(bytes), big_(big_endian) {}

    [[nodiscard]] std::uint32_t u32(std::size_t off) const {
        const std::uint8_t* p = b_ + off;
        if (big_)
            return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) | p[3];
        return std::uint32_t{p[0]} | (std::uint32_t{p[1]} << 8) | (std::uint32_t{p[2]} << 16) |
               (std::uint32_t{p[3]} << 24);
    }
    [[nodiscard]] std::int32_t i32(std::size_t off) const { return static_cast<std::int32_t>(u32(off)); }
    [[nodiscard]] float f32(std::size_t off) const { return std::bit_cast<float>(u32(off)); }

private:
    const std::uint8_t* b_;
    bool big_;
};

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open '" + path.string() + "' for reading");
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("error reading '" + path.string() + "'");
    return bytes;
}

std::size_t bytes_per_sample(std::int32_t mode) {
    switch (mode) {
    case 0:
        return 1;
    case 1:
        return 2;
    case 2:
        return 4;
    default:
        return 0;
    }
}

} // namespace

std::vector<std::uint8_t> encode_mrc(Dims3 dims, std::span<const double> values, MrcKind kind) {
    if (values.size() != dims.size())
        throw InvalidArgument("encode_mrc: value count does not match dimensions");
    if (!all_finite(values))
        throw InvalidArgument("encode_mrc: data contains non-finite values");

    std::vector<std::uint8_t> out(kMrcHeaderBytes + 4 * values.size(), 0);
    std::uint8_t* payload = out.data() + kMrcHeaderBytes;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, total = 0, squares = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const float f = static_cast<float>(values[i]);
        put_f32(payload + 4 * i, f);
        lo = std::min(lo, static_cast<double>(f));
        hi = std::max(hi, static_cast<double>(f));
        total += f;
    }
    const double mean = total / static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double d = static_cast<float>(values[i]) - mean;
        squares += d * d;
    }
    const double rms = std::sqrt(squares / static_cast<double>(values.size()));

    std::uint8_t* h = out.data();
    put_i32(h + kOffNx, dims.nx);
    put_i32(h + kOffNx + 4, dims.ny);
    put_i32(h + kOffNx + 8, dims.nz);
    put_i32(h + kOffMode, 2);
    for (int i = 0; i < 3; ++i)
        put_i32(h + kOffStart + 4 * i, 0);
    const int grid[3] = {dims.nx, dims.ny, dims.nz};
    for (int i = 0; i < 3; ++i) {
        put_i32(h + kOffGrid + 4 * i, grid[i]);
        put_f32(h + kOffCell + 4 * i, static_cast<float>(grid[i]));
        put_f32(h + kOffAngles + 4 * i, 90.0f);
        put_i32(h + kOffAxes + 4 * i, i + 1);
    }
    put_f32(h + kOffDmin, static_cast<float>(lo));
    put_f32(h + kOffDmax, static_cast<float>(hi));
    put_f32(h + kOffDmean, static_cast<float>(mean));
    put_i32(h + kOffIspg, kind == MrcKind::Volume ? 1 : 0);
    put_i32(h + kOffNsymbt, 0);
    std::memcpy(h + kOffExttyp, "MRCO", 4);
    put_i32(h + kOffNversion, 20140);
    for (int i = 0; i < 3; ++i)
        put_f32(h + kOffOrigin + 4 * i, 0.0f);
    std::memcpy(h + kOffMap, "MAP ", 4);
    h[kOffMachst] = 0x44;
    h[kOffMachst + 1] = 0x44;
    put_f32(h + kOffRms, static_cast<float>(rms));
    put_i32(h + kOffNlabl, 1);
    std::memset(h + kOffLabels, ' ', 800);
    const char label[] = "resire";
    std::memcpy(h + kOffLabels, label, sizeof(label) - 1);
    return out;
}

MrcData read_mrc(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_bytes(path);
    const std::string where = "'" + path.string() + "': ";
    if (bytes.size() < kMrcHeaderBytes)
        throw FormatError(where + "truncated header: expected " + std::to_string(kMrcHeaderBytes) +
                              " bytes, found " + std::to_string(bytes.size()),
                          bytes.size());
    if (std::memcmp(bytes.data() + kOffMap, "MAP ", 4) != 0)
        throw FormatError(where + "bad magic at byte " + std::to_string(kOffMap) + " (expected 'MAP ')", kOffMap);

    const bool big_endian = bytes[kOffMachst] == 0x11;
    const HeaderReader r(bytes.data(), big_endian);

    MrcData data;
    MrcHeader& h = data.header;
    h.nx = r.i32(kOffNx);
    h.ny = r.i32(kOffNx + 4);
    h.nz = r.i32(kOffNx + 8);
    h.mode = r.i32(kOffMode);
    for (int i = 0; i < 3; ++i)
        h.cell[static_cast<std::size_t>(i)] = r.f32(kOffCell + 4 * i);
    h.dmin = r.f32(kOffDmin);
    h.dmax = r.f32(kOffDmax);
    h.dmean = r.f32(kOffDmean);
    h.rms = r.f32(kOffRms);
    h.ispg = r.i32(kOffIspg);
    h.nsymbt = r.i32(kOffNsymbt);
    h.nversion = r.i32(kOffNversion);

    if (h.nx < 1 || h.ny < 1 || h.nz < 1)
        throw FormatError(where + "non-positive dimensions at byte 0", kOffNx);
    const std::size_t sample = bytes_per_sample(h.mode);
    if (sample == 0)
        throw FormatError(where + "unsupported mode " + std::to_string(h.mode) + " at byte " +
                              std::to_string(kOffMode),
                          kOffMode);
    if (h.nsymbt < 0)
        throw FormatError(where + "negative extended header size at byte " + std::to_string(kOffNsymbt), kOffNsymbt);

    const auto count = static_cast<unsigned __int128>(h.nx) * static_cast<unsigned __int128>(h.ny) *
                       static_cast<unsigned __int128>(h.nz);
    if (count * sample > std::numeric_limits<std::uint32_t>::max() * static_cast<unsigned __int128>(16))
        throw FormatError(where + "dimension overflow (" + std::to_string(h.nx) + " x " + std::to_string(h.ny) +
                              " x " + std::to_string(h.nz) + ")",
                          kOffNx);
    const std::size_t payload_offset = kMrcHeaderBytes + static_cast<std::size_t>(h.nsymbt);
    const std::size_t expected = payload_offset + static_cast<std::size_t>(count) * sample;
    if (bytes.size() < expected)
        throw FormatError(where + "truncated payload: expected " + std::to_string(expected) + " bytes, found " +
                              std::to_string(bytes.size()),
                          bytes.size());

    data.dims = {h.nx, h.ny, h.nz};
    data.values.resize(static_cast<std::size_t>(count));
    const std::uint8_t* p = bytes.data() + payload_offset;
    const HeaderReader payload(p, big_endian);
    for (std::size_t i = 0; i < data.values.size(); ++i) {
        switch (h.mode) {
        case 0:
            data.values[i] = static_cast<std::int8_t>(p[i]);
            break;
        case 1: {
            const std::uint8_t* q = p + 2 * i;
            const auto bits = big_endian ? static_cast<std::uint16_t>((q[0] << 8) | q[1])
                                         : static_cast<std::uint16_t>(q[0] | (q[1] << 8));
            data.values[i] = static_cast<std::int16_t>(bits);
            break;
        }
        default:
            data.values[i] = payload.f32(4 * i);
        }
    }
    if (!all_finite(data.values))
        throw FormatError(where + "payload contains non-finite values", payload_offset);
    return data;
}

Volume read_mrc_volume(const std::filesystem::path& path) {
    MrcData d = read_mrc(path);
    return Volume(d.dims, std::move(d.values));
}

void write_mrc(const std::filesystem::path& path, const Volume& v) {
    write_file_atomic(path, encode_mrc(v.dims(), v.values(), MrcKind::Volume));
}

void write_mrc(const std::filesystem::path& path, const std::vector<Projection>& projections) {
    if (projections.empty())
        throw InvalidArgument("write_mrc: no projections");
    const Dims2 d = projections.front().dims();
    std::vector<double> values;
    values.reserve(d.size() * projections.size());
    for (const auto& p : projections) {
        if (p.dims() != d)
            throw InvalidArgument("write_mrc: projections differ in size");
        values.insert(values.end(), p.values().begin(), p.values().end());
    }
    const Dims3 dims{d.nx, d.ny, static_cast<int>(projections.size())};
    write_file_atomic(path, encode_mrc(dims, values, MrcKind::ImageStack));
}

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out)
            throw IoError("error writing '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

void write_text_atomic(const std::filesystem::path& path, std::string_view text) {
    write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string read_text_file(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_bytes(path);
    return std::string(bytes.begin(), bytes.end());
}

} // namespace resire
