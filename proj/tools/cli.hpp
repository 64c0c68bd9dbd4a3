// cli.hpp: the `sbs` command line: generate, analyze, sweep.
//
// Exit codes: 0 success, 1 invalid state file, 2 bad arguments, 3 I/O error.

#pragma once

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sbs/generators.hpp"
#include "sbs/io.hpp"
#include "sbs/sbs.hpp"

namespace sbs::cli {

enum ExitCode : int { kOk = 0, kInvalidState = 1, kBadArguments = 2, kIoFailure = 3 };

struct GenerateArgs {
    std::string family;
    double p = 0.5;
    std::size_t fragments = 3;
    std::vector<std::size_t> dims{2, 2, 2};
    std::size_t n_pointer = 2;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::string out;
};

struct AnalyzeArgs {
    std::string in;
    std::string system = "S";
    double tol = kDefaultTol;
    std::string format = "text";
};

struct SweepArgs {
    std::string family;
    double p_start = 0.0;
    double p_end = 1.0;
    int steps = 11;
    std::size_t fragments = 3;
    double tol = kDefaultTol;
    std::string out;
};

inline int cmd_generate(const GenerateArgs& args, std::ostream& err) {
    FamilySpec spec;
    std::optional<MultipartiteState> state;
    try {
        spec.family = parse_family(args.family);
        spec.p = args.p;
        spec.fragments = args.fragments;
        spec.dims = args.dims;
        spec.n_pointer = args.n_pointer;
        spec.epsilon = args.epsilon;
        spec.seed = args.seed;
        state = generate(spec);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kBadArguments;
    }
    try {
        write_state_file(args.out, *state);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    }
    return kOk;
}

inline int cmd_analyze(const AnalyzeArgs& args, std::ostream& out, std::ostream& err) {
    if (!(args.tol > 0.0)) {
        err << "error: --tol must be positive\n";
        return kBadArguments;
    }
    std::optional<MultipartiteState> state;
    try {
        state = read_state_file(args.in, args.tol);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const Error& e) {
        err << "error: invalid state: " << e.what() << '\n';
        return kInvalidState;
    }

    std::size_t system = 0;
    try {
        system = state->index_of(args.system);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kBadArguments;
    }
    if (state->size() < 3) {
        err << "error: analysis needs the system plus at least two fragments\n";
        return kBadArguments;
    }

    const auto report = analyze(*state, system, args.tol);
    if (args.format == "json") {
        out << report_to_json(report).dump(2) << '\n';
    } else {
        out << report_to_text(report);
    }
    return kOk;
}

inline std::vector<double> linear_grid(double start, double end, int steps) {
    std::vector<double> grid;
    for (int k = 0; k < steps; ++k) {
        grid.push_back(k == steps - 1 ? end : start + (end - start) * k / (steps - 1));
    }
    return grid;
}

inline int cmd_sweep(const SweepArgs& args, std::ostream& out, std::ostream& err) {
    if (args.steps < 2) {
        err << "error: --steps must be at least 2\n";
        return kBadArguments;
    }
    std::string csv = std::string(kSweepHeader) + "\n";
    try {
        const Family family = parse_family(args.family);
        if (family != Family::counterexample && family != Family::parity_family) {
            err << "error: sweep supports counterexample and parity-family\n";
            return kBadArguments;
        }
        for (double p : linear_grid(args.p_start, args.p_end, args.steps)) {
            const auto state = family == Family::counterexample ? counterexample(p) : parity_family(args.fragments, p);
            csv += sweep_row(p, analyze(state, 0, args.tol)) + "\n";
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kBadArguments;
    }
    if (args.out.empty()) {
        out << csv;
        return kOk;
    }
    try {
        write_text_file(args.out, csv);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    }
    return kOk;
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Spectrum Broadcast Structure analysis of system-environment states", "sbs"};
    app.require_subcommand(1);

    GenerateArgs gen;
    auto* generate_cmd = app.add_subcommand("generate", "Write a state from a named family to a JSON state file");
    generate_cmd->add_option("family", gen.family, "counterexample | parity-family | random-sbs | perturbed")
        ->required();
    generate_cmd->add_option("--p", gen.p, "mixing probability of the pointer outcome 1");
    generate_cmd->add_option("--F,--fragments", gen.fragments, "number of qutrit fragments (parity family)");
    generate_cmd->add_option("--dims", gen.dims, "subsystem dimensions, system first")->delimiter(',');
    generate_cmd->add_option("--n-pointer", gen.n_pointer, "number of pointer states (random-sbs, perturbed)");
    generate_cmd->add_option("--epsilon", gen.epsilon, "noise weight (perturbed)");
    generate_cmd->add_option("--seed", gen.seed, "RNG seed");
    generate_cmd->add_option("-o,--out", gen.out, "output state file")->required();

    AnalyzeArgs ana;
    auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a state file");
    analyze_cmd->add_option("file", ana.in, "state file")->required();
    analyze_cmd->add_option("--system", ana.system, "label of the system; the other subsystems are the fragments");
    analyze_cmd->add_option("--tol", ana.tol, "absolute tolerance");
    analyze_cmd->add_option("--format", ana.format, "text | json")->check(CLI::IsMember({"text", "json"}));

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate the analysis over a linear grid of p as CSV");
    sweep_cmd->add_option("family", sw.family, "counterexample | parity-family")->required();
    sweep_cmd->add_option("--p-start", sw.p_start, "first p");
    sweep_cmd->add_option("--p-end", sw.p_end, "last p");
    sweep_cmd->add_option("--steps", sw.steps, "grid points, endpoints included");
    sweep_cmd->add_option("--F,--fragments", sw.fragments, "number of fragments (parity family)");
    sweep_cmd->add_option("--tol", sw.tol, "absolute tolerance");
    sweep_cmd->add_option("-o,--out", sw.out, "output CSV (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kBadArguments;
    }

    if (generate_cmd->parsed()) return cmd_generate(gen, err);
    if (analyze_cmd->parsed()) return cmd_analyze(ana, out, err);
    return cmd_sweep(sw, out, err);
}

}  // namespace sbs::cli
