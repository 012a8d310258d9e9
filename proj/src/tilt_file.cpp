#include <cmath>
#include <sstream>

#include "resire/errors.hpp"
#include "resire/io.hpp"
#include "resire/keyvalue.hpp"

namespace resire {

TiltSeries parse_tilt_text(std::string_view text) {
    TiltSeries angles;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        std::string token;
        while (fields >> token)
            tokens.push_back(token);
        if (tokens.size() != 3)
            throw FormatError("tilt file line " + std::to_string(line_no) + ": expected 'phi theta psi', got " +
                                  std::to_string(tokens.size()) + " fields",
                              line_no);
        try {
            angles.push_back({parse_double(tokens[0]), parse_double(tokens[1]), parse_double(tokens[2])});
        } catch (const InvalidArgument& e) {
            throw FormatError("tilt file line " + std::to_string(line_no) + ": " + e.what(), line_no);
        }
        const auto& a = angles.back();
        if (!std::isfinite(a.phi) || !std::isfinite(a.theta) || !std::isfinite(a.psi))
            throw FormatError("tilt file line " + std::to_string(line_no) + ": non-finite angle", line_no);
    }
    return angles;
}

std::string format_tilt_text(const TiltSeries& angles) {
    std::string out = "# phi theta psi (degrees, ZYX)\n";
    for (const auto& e : angles)
        out += format_double(e.phi) + " " + format_double(e.theta) + " " + format_double(e.psi) + "\n";
    return out;
}

TiltSeries read_tilt_file(const std::filesystem::path& path) {
    try {
        return parse_tilt_text(read_text_file(path));
    } catch (const FormatError& e) {
        throw FormatError("'" + path.string() + "': " + e.what(), e.offset());
    }
}

void write_tilt_file(const std::filesystem::path& path, const TiltSeries& angles) {
    write_text_atomic(path, format_tilt_text(angles));
}

ProjectionStack read_projection_stack(const std::filesystem::path& mrc, const std::filesystem::path& tilt) {
    MrcData data = read_mrc(mrc);
    TiltSeries angles = read_tilt_file(tilt);
    if (static_cast<std::size_t>(data.dims.nz) != angles.size())
        throw FormatError("stack '" + mrc.string() + "' holds " + std::to_string(data.dims.nz) +
                              " projections but tilt file '" + tilt.string() + "' lists " +
                              std::to_string(angles.size()) + " angles",
                          0);
    ProjectionStack stack;
    stack.angles = std::move(angles);
    const Dims2 d{data.dims.nx, data.dims.ny};
    for (int z = 0; z < data.dims.nz; ++z) {
        const auto begin = data.values.begin() + static_cast<std::ptrdiff_t>(d.size() * static_cast<std::size_t>(z));
        stack.projections.emplace_back(d, std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(d.size())));
    }
    return stack;
}

} // namespace resire
