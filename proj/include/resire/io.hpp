#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "resire/grid.hpp"
#include "resire/metrics.hpp"
#include "resire/solver.hpp"

namespace resire {

/// File system failure, with the offending path in the message.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// MRC2014
//
// 1024-byte header followed by nx * ny * nz samples, x fastest. Writes are always
// mode 2 (little-endian float32) with min / max / mean / rms recomputed from the
// stored float values, machine stamp 0x44 0x44 0x00 0x00 and no timestamps, so
// identical data gives byte-identical files. Reads accept modes 0 (int8),
// 1 (int16) and 2 (float32) in either byte order and promote to double.
// ---------------------------------------------------------------------------

inline constexpr std::size_t kMrcHeaderBytes = 1024;

struct MrcHeader {
    std::int32_t nx{0}, ny{0}, nz{0};
    std::int32_t mode{2};
    std::array<float, 3> cell{};
    float dmin{0}, dmax{0}, dmean{0}, rms{0};
    std::int32_t ispg{0};
    std::int32_t nsymbt{0};
    std::int32_t nversion{20140};
};

struct MrcData {
    MrcHeader header;
    Dims3 dims;
    std::vector<double> values;
};

enum class MrcKind { Volume, ImageStack };

[[nodiscard]] MrcData read_mrc(const std::filesystem::path& path);
[[nodiscard]] Volume read_mrc_volume(const std::filesystem::path& path);

/// Serializes to an in-memory MRC image (header + payload).
[[nodiscard]] std::vector<std::uint8_t> encode_mrc(Dims3 dims, std::span<const double> values, MrcKind kind);
void write_mrc(const std::filesystem::path& path, const Volume& v);
/// Projections as an image stack: nz = number of projections.
void write_mrc(const std::filesystem::path& path, const std::vector<Projection>& projections);

// ---------------------------------------------------------------------------
// Tilt files: one "phi theta psi" line (degrees) per projection; '#' starts a comment line.
// ---------------------------------------------------------------------------

[[nodiscard]] TiltSeries parse_tilt_text(std::string_view text);
[[nodiscard]] std::string format_tilt_text(const TiltSeries& angles);
[[nodiscard]] TiltSeries read_tilt_file(const std::filesystem::path& path);
void write_tilt_file(const std::filesystem::path& path, const TiltSeries& angles);

/// An MRC image stack paired with its tilt file. Throws FormatError naming both
/// counts when the stack depth and the number of angles disagree.
[[nodiscard]] ProjectionStack read_projection_stack(const std::filesystem::path& mrc,
                                                    const std::filesystem::path& tilt);

// ---------------------------------------------------------------------------
// CSV exports
// ---------------------------------------------------------------------------

[[nodiscard]] std::string trace_csv(const SolveTrace& trace);          // iter,sse,rfactor,seconds
[[nodiscard]] std::string fsc_csv(const FscCurve& curve);              // freq_cyc_per_px,fsc,count
[[nodiscard]] std::string rfactor_csv(const RFactorReport& report, const TiltSeries& angles);
                                                                       // angle_index,phi,theta,psi,rfactor

// ---------------------------------------------------------------------------
// Files are written to "<path>.tmp" and renamed into place.
// ---------------------------------------------------------------------------

void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_atomic(const std::filesystem::path& path, std::string_view text);
[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

} // namespace resire
