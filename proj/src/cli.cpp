#include "resire/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "resire/baselines.hpp"
#include "resire/errors.hpp"
#include "resire/io.hpp"
#include "resire/keyvalue.hpp"
#include "resire/metrics.hpp"
#include "resire/phantom.hpp"
#include "resire/solver.hpp"

namespace resire {

namespace fs = std::filesystem;

namespace {

std::vector<double> split_numbers(const std::string& text, std::size_t expected, const std::string& option) {
    std::vector<double> values;
    std::stringstream in(text);
    std::string token;
    while (std::getline(in, token, ','))
        values.push_back(parse_double(token));
    if (values.size() != expected)
        throw CLI::ValidationError(option, "expected " + std::to_string(expected) + " comma-separated numbers");
    return values;
}

Dims3 parse_dims(const std::string& text) {
    const auto v = split_numbers(text, 3, "--dims");
    Dims3 d{static_cast<int>(v[0]), static_cast<int>(v[1]), static_cast<int>(v[2])};
    if (d.nx < 1 || d.ny < 1 || d.nz < 1 || v[0] != d.nx || v[1] != d.ny || v[2] != d.nz)
        throw CLI::ValidationError("--dims", "dimensions must be positive integers");
    return d;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());
}

struct SimulateArgs {
    std::string phantom;
    std::string tilt;
    std::optional<double> noise;
    std::optional<std::uint64_t> seed;
    double oversample{kDefaultOversampling};
    std::string out;
};

struct ReconstructArgs {
    std::string algo{"resire"};
    std::string stack;
    std::string angles;
    std::string dims;
    std::optional<int> iters;
    std::optional<double> step;
    double oversample{kDefaultOversampling};
    bool positivity{false};
    std::optional<double> rfactor_target;
    std::string filter{"ram-lak"};
    std::string out;
};

struct EvaluateArgs {
    std::string recon, truth, stack, angles, out;
    double oversample{kDefaultOversampling};
    double shell_width{0};
};

struct CompareArgs {
    std::string dir;
    std::string dims;
    int iters{400};
    double oversample{kDefaultOversampling};
};

void run_simulate(const SimulateArgs& a, std::ostream& out) {
    Preset preset = load_preset(a.phantom);
    if (!a.tilt.empty()) {
        const auto t = split_numbers(a.tilt, 3, "--tilt");
        preset.tilt = {t[0], t[1], t[2]};
    }
    if (a.noise)
        preset.noise.sigma_fraction = *a.noise;
    if (a.seed)
        preset.noise.seed = *a.seed;

    const Volume truth = make_vesicle_phantom(preset.phantom);
    const TiltSeries angles = tilt_range(preset.tilt.start, preset.tilt.end, preset.tilt.step);
    const ProjectionStack stack = simulate_stack(truth, angles, preset.noise, {a.oversample, truth.dims()});

    const fs::path dir(a.out);
    ensure_dir(dir);
    write_mrc(dir / "truth.mrc", truth);
    write_mrc(dir / "stack.mrc", stack.projections);
    write_tilt_file(dir / "angles.tlt", angles);
    out << "simulated " << a.phantom << ": " << angles.size() << " projections of " << truth.dims().nx << "x"
        << truth.dims().ny << "x" << truth.dims().nz << " -> " << dir.string() << "\n";
}

FbpFilter parse_filter(const std::string& name) {
    if (name == "ram-lak")
        return FbpFilter::RamLak;
    if (name == "hamming")
        return FbpFilter::HammingRamLak;
    throw CLI::ValidationError("--filter", "expected ram-lak or hamming");
}

struct AlgorithmResult {
    Volume volume;
    SolveTrace trace;
};

AlgorithmResult run_algorithm(const std::string& algo, const ProjectionStack& stack, Dims3 dims, int iters,
                              std::optional<double> step, double oversample, bool positivity,
                              std::optional<double> rfactor_target, FbpFilter filter) {
    if (algo == "resire") {
        SolverConfig cfg;
        cfg.iterations = iters;
        if (step)
            cfg.step_t = *step;
        cfg.oversampling_ratio = oversample;
        cfg.nonnegativity = positivity;
        cfg.rfactor_target = rfactor_target;
        auto [v, t] = resire_solve(stack, dims, cfg);
        return {std::move(v), std::move(t)};
    }
    if (algo == "sirt") {
        SirtConfig cfg;
        cfg.iterations = iters;
        if (step)
            cfg.relaxation = *step;
        auto [v, t] = sirt_solve(stack, dims, cfg);
        return {std::move(v), std::move(t)};
    }
    const auto start = std::chrono::steady_clock::now();
    Volume v = fbp_solve(stack, dims, {filter});
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    SolverConfig cfg;
    cfg.oversampling_ratio = oversample;
    SolveTrace t;
    t.sse_history.push_back(sse(stack, v, cfg));
    t.rfactor_history.push_back(rfactor(stack, v, cfg.projector(dims)).aggregate);
    t.seconds.push_back(seconds);
    return {std::move(v), std::move(t)};
}

void run_reconstruct(const ReconstructArgs& a, std::ostream& out) {
    const Dims3 dims = parse_dims(a.dims);
    const FbpFilter filter = parse_filter(a.filter);
    const ProjectionStack stack = read_projection_stack(a.stack, a.angles);
    const int iters = a.iters.value_or(400);

    AlgorithmResult r =
        run_algorithm(a.algo, stack, dims, iters, a.step, a.oversample, a.positivity, a.rfactor_target, filter);

    const fs::path dir(a.out);
    ensure_dir(dir);
    write_mrc(dir / "recon.mrc", r.volume);
    write_text_atomic(dir / "trace.csv", trace_csv(r.trace));
    if (a.algo == "resire") {
        SolverConfig cfg;
        cfg.iterations = iters;
        if (a.step)
            cfg.step_t = *a.step;
        cfg.oversampling_ratio = a.oversample;
        cfg.nonnegativity = a.positivity;
        cfg.rfactor_target = a.rfactor_target;
        write_text_atomic(dir / "solver.cfg", cfg.to_text());
    }
    out << a.algo << ": " << r.trace.size() << " iterations, last R_F " << format_double(r.trace.rfactor_history.back())
        << " -> " << dir.string() << "\n";
}

void run_evaluate(const EvaluateArgs& a, std::ostream& out) {
    const Volume recon = read_mrc_volume(a.recon);
    const Volume truth = read_mrc_volume(a.truth);
    const ProjectionStack stack = read_projection_stack(a.stack, a.angles);
    if (recon.dims() != truth.dims())
        throw InvalidArgument("reconstruction and truth dimensions differ");
    const FscCurve curve = fsc(recon, truth, a.shell_width);
    const RFactorReport report = rfactor(stack, recon, {a.oversample, recon.dims()});

    const fs::path dir(a.out);
    ensure_dir(dir);
    write_text_atomic(dir / "fsc.csv", fsc_csv(curve));
    write_text_atomic(dir / "rfactor.csv", rfactor_csv(report, stack.angles));
    out << "R_F " << format_double(report.aggregate) << ", " << curve.size() << " FSC shells -> " << dir.string()
        << "\n";
}

void run_compare(const CompareArgs& a, std::ostream& out) {
    const fs::path dir(a.dir);
    const ProjectionStack stack = read_projection_stack(dir / "stack.mrc", dir / "angles.tlt");
    const bool has_truth = fs::exists(dir / "truth.mrc");
    std::optional<Volume> truth;
    if (has_truth)
        truth = read_mrc_volume(dir / "truth.mrc");
    Dims3 dims{stack.projection_dims().nx, stack.projection_dims().ny, stack.projection_dims().nx};
    if (!a.dims.empty())
        dims = parse_dims(a.dims);
    else if (truth)
        dims = truth->dims();

    std::string csv = "algorithm,rfactor,seconds\n";
    out << std::left << std::setw(10) << "algorithm" << std::setw(14) << "R_F" << "seconds\n";
    for (const std::string algo : {"resire", "sirt", "fbp"}) {
        const auto start = std::chrono::steady_clock::now();
        AlgorithmResult r = run_algorithm(algo, stack, dims, a.iters, std::nullopt, a.oversample, false,
                                          std::nullopt, FbpFilter::RamLak);
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const double rf = rfactor(stack, r.volume, {a.oversample, dims}).aggregate;
        write_mrc(dir / ("recon_" + algo + ".mrc"), r.volume);
        if (truth && truth->dims() == dims)
            write_text_atomic(dir / ("fsc_" + algo + ".csv"), fsc_csv(fsc(r.volume, *truth)));
        csv += algo + "," + format_double(rf) + "," + format_double(seconds) + "\n";
        std::ostringstream rf_text, sec_text;
        rf_text << std::fixed << std::setprecision(4) << 100.0 * rf << "%";
        sec_text << std::fixed << std::setprecision(2) << seconds;
        out << std::left << std::setw(10) << algo << std::setw(14) << rf_text.str() << sec_text.str() << "\n";
    }
    write_text_atomic(dir / "summary.csv", csv);
}

} // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"RESIRE tomographic reconstruction"};
    app.name("resire");
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Simulate a phantom and its tilt series");
    simulate->add_option("--phantom", sim.phantom, "Preset name (vesicle64, ball32)")->required();
    simulate->add_option("--tilt", sim.tilt, "start,end,step in degrees (default from preset)");
    simulate->add_option("--noise", sim.noise, "Gaussian noise sigma as a fraction of mean positive intensity");
    simulate->add_option("--seed", sim.seed, "Noise seed (default from preset)");
    simulate->add_option("--oversample", sim.oversample, "Oversampling ratio of the projector");
    simulate->add_option("--out", sim.out, "Output directory")->required();

    ReconstructArgs rec;
    auto* reconstruct = app.add_subcommand("reconstruct", "Reconstruct a volume from a projection stack");
    reconstruct->add_option("--algo", rec.algo, "resire, sirt or fbp")
        ->check(CLI::IsMember({"resire", "sirt", "fbp"}));
    reconstruct->add_option("--stack", rec.stack, "Projection stack (MRC)")->required();
    reconstruct->add_option("--angles", rec.angles, "Tilt file")->required();
    reconstruct->add_option("--dims", rec.dims, "Volume dimensions X,Y,Z")->required();
    reconstruct->add_option("--iters", rec.iters, "Iterations (default 400)");
    reconstruct->add_option("--step", rec.step, "Normalized step t (resire, default 2) or relaxation (sirt, default 1)");
    reconstruct->add_option("--oversample", rec.oversample, "Oversampling ratio (default 2)");
    reconstruct->add_flag("--positivity", rec.positivity, "Clamp negative voxels after each update (resire)");
    reconstruct->add_option("--rfactor-target", rec.rfactor_target, "Stop once R_F reaches this value (resire)");
    reconstruct->add_option("--filter", rec.filter, "FBP filter: ram-lak or hamming");
    reconstruct->add_option("--out", rec.out, "Output directory")->required();

    EvaluateArgs ev;
    auto* evaluate = app.add_subcommand("evaluate", "FSC and R-factor of a reconstruction");
    evaluate->add_option("--recon", ev.recon, "Reconstruction (MRC)")->required();
    evaluate->add_option("--truth", ev.truth, "Reference volume (MRC)")->required();
    evaluate->add_option("--stack", ev.stack, "Projection stack (MRC)")->required();
    evaluate->add_option("--angles", ev.angles, "Tilt file")->required();
    evaluate->add_option("--oversample", ev.oversample, "Oversampling ratio (default 2)");
    evaluate->add_option("--shell-width", ev.shell_width, "FSC shell width in cycles/pixel (default 1/N)");
    evaluate->add_option("--out", ev.out, "Output directory")->required();

    CompareArgs cmp;
    auto* compare = app.add_subcommand("compare", "Run resire, sirt and fbp on one stack");
    compare->add_option("--dir", cmp.dir, "Directory holding stack.mrc and angles.tlt (and optionally truth.mrc)")
        ->required();
    compare->add_option("--dims", cmp.dims, "Volume dimensions X,Y,Z (default from truth.mrc)");
    compare->add_option("--iters", cmp.iters, "Iterations for resire and sirt (default 400)");
    compare->add_option("--oversample", cmp.oversample, "Oversampling ratio (default 2)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        if (simulate->parsed())
            run_simulate(sim, out);
        else if (reconstruct->parsed())
            run_reconstruct(rec, out);
        else if (evaluate->parsed())
            run_evaluate(ev, out);
        else if (compare->parsed())
            run_compare(cmp, out);
        return kExitOk;
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DivergenceError& e) {
        err << "error: solver diverged at iteration " << e.iteration() << ": " << e.what() << "\n";
        return kExitDivergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
    }
}

} // namespace resire
