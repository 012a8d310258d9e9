#include <string>

#include "resire/errors.hpp"
#include "resire/io.hpp"
#include "resire/keyvalue.hpp"

namespace resire {

std::string trace_csv(const SolveTrace& trace) {
    std::string out = "iter,sse,rfactor,seconds\n";
    for (std::size_t k = 0; k < trace.size(); ++k)
        out += std::to_string(k + 1) + "," + format_double(trace.sse_history[k]) + "," +
               format_double(trace.rfactor_history[k]) + "," + format_double(trace.seconds[k]) + "\n";
    return out;
}

std::string fsc_csv(const FscCurve& curve) {
    std::string out = "freq_cyc_per_px,fsc,count\n";
    for (const auto& s : curve)
        out += format_double(s.frequency) + "," + format_double(s.correlation) + "," + std::to_string(s.count) + "\n";
    return out;
}

std::string rfactor_csv(const RFactorReport& report, const TiltSeries& angles) {
    if (report.per_angle.size() != angles.size())
        throw InvalidArgument("rfactor_csv: report and tilt series lengths differ");
    std::string out = "angle_index,phi,theta,psi,rfactor\n";
    for (std::size_t i = 0; i < angles.size(); ++i)
        out += std::to_string(i) + "," + format_double(angles[i].phi) + "," + format_double(angles[i].theta) + "," +
               format_double(angles[i].psi) + "," + format_double(report.per_angle[i]) + "\n";
    return out;
}

} // namespace resire
