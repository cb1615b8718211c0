// susyosc_main.cpp — CLI front end: verify, spectrum, thermal-sweep, frequencies,
// and goldstino subcommands over the truncated-Fock-space engine.

#include "susyosc/sweep.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

using namespace susyosc;

// --nb accepts a positive integer or "auto"; auto maps to 0 for adaptive
// commands and to a fixed desk-scale cutoff elsewhere.
int parse_nb(const std::string& text, int auto_value) {
    if (text == "auto") return auto_value;
    try {
        const int nb = std::stoi(text);
        if (nb >= 2) return nb;
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("--nb", "expected a cutoff >= 2 or 'auto'");
}

FockSpaceConfig single_space(const ModelParams& params, int boson_cutoff) {
    FockSpaceConfig cfg;
    cfg.boson_cutoff = boson_cutoff;
    cfg.guard_band = displacement_aware_guard(boson_cutoff, params.lambda());
    return cfg;
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(out_path, text);
        std::cout << "wrote " << out_path << "\n";
    }
}

int run(int argc, char** argv) {
    CLI::App app{"Truncated Fock-space engine for the interacting SUSY oscillator: "
                 "operator-algebra verification, spectra, and thermal (TFD) sweeps"};
    app.require_subcommand(1);

    double omega1 = 1.0, alpha2 = 0.5, omega2 = 5.0;
    double tolerance = 0.0, tail_tolerance = 1e-8;
    double t_min = 0.1, t_max = 2.0;
    int points = 25, k = 7;
    std::string nb = "auto", out_path, format = "csv";
    bool plot = false;

    double omega2_override = 0.0;
    CLI::App* verify = app.add_subcommand(
        "verify", "Run the full invariant suite (algebra, SUSY exactness, reduction)");
    verify->add_option("--omega1", omega1, "Bosonic frequency")->capture_default_str();
    verify->add_option("--alpha2", alpha2, "Interaction strength")->capture_default_str();
    verify->add_option("--omega2", omega2_override,
                       "Detune the fermionic frequency (0 = SUSY condition)")
        ->capture_default_str();
    verify->add_option("--nb", nb, "Boson cutoff (integer or 'auto')")->capture_default_str();
    verify->add_option("--tolerance", tolerance, "Override per-check tolerances (0 = defaults)")
        ->capture_default_str();
    verify->add_option("--out", out_path, "Write the JSON report here (default: stdout)");

    CLI::App* spec_cmd = app.add_subcommand(
        "spectrum", "Lowest k eigenvalues grouped into degenerate levels (CSV)");
    spec_cmd->add_option("--omega1", omega1, "Bosonic frequency")->capture_default_str();
    spec_cmd->add_option("--alpha2", alpha2, "Interaction strength")->capture_default_str();
    spec_cmd->add_option("--k", k, "Number of eigenvalues, counted with multiplicity")
        ->capture_default_str();
    spec_cmd->add_option("--nb", nb, "Boson cutoff (integer or 'auto')")->capture_default_str();
    spec_cmd->add_option("--out", out_path, "Write the CSV here (default: stdout)");

    CLI::App* sweep = app.add_subcommand(
        "thermal-sweep", "Thermal-vacuum observables over a uniform T/omega1 grid");
    sweep->add_option("--omega1", omega1, "Bosonic frequency")->capture_default_str();
    sweep->add_option("--alpha2", alpha2, "Interaction strength")->capture_default_str();
    sweep->add_option("--tmin", t_min, "Lowest T/omega1")->capture_default_str();
    sweep->add_option("--tmax", t_max, "Highest T/omega1")->capture_default_str();
    sweep->add_option("--points", points, "Grid size (>= 2)")->capture_default_str();
    sweep->add_option("--nb", nb, "Boson cutoff per row (integer or 'auto')")
        ->capture_default_str();
    sweep->add_option("--out", out_path, "Output path (default: sweep.csv)");
    sweep->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sweep->add_flag("--plot", plot, "Also write an SVG chart and a gnuplot data file");
    sweep->add_option("--tolerance", tail_tolerance, "Truncation tail tolerance")
        ->capture_default_str();

    CLI::App* freq = app.add_subcommand(
        "frequencies", "Bosonic frequencies compatible with given (omega2, alpha2)");
    freq->add_option("--omega2", omega2, "Fermionic frequency")->required();
    freq->add_option("--alpha2", alpha2, "Interaction strength")->required();
    freq->add_option("--out", out_path, "Write the JSON here (default: stdout)");

    CLI::App* gold = app.add_subcommand(
        "goldstino", "Goldstino norms over a uniform T/omega1 grid (CSV)");
    gold->add_option("--omega1", omega1, "Bosonic frequency")->capture_default_str();
    gold->add_option("--alpha2", alpha2, "Interaction strength")->capture_default_str();
    gold->add_option("--tmin", t_min, "Lowest T/omega1")->capture_default_str();
    gold->add_option("--tmax", t_max, "Highest T/omega1")->capture_default_str();
    gold->add_option("--points", points, "Grid size (>= 2)")->capture_default_str();
    gold->add_option("--nb", nb, "Boson cutoff per row (integer or 'auto')")
        ->capture_default_str();
    gold->add_option("--out", out_path, "Write the CSV here (default: stdout)");
    gold->add_option("--tolerance", tail_tolerance, "Truncation tail tolerance")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    const ModelParams params{omega1, alpha2};

    if (*verify) {
        const nlohmann::json report = cmd_verify(
            params, single_space(params, parse_nb(nb, 64)), tolerance, omega2_override);
        emit(report.dump(2) + "\n", out_path);
        if (!report.at("all_passed").get<bool>()) {
            std::cerr << "verify: at least one check failed\n";
            return 1;
        }
        return 0;
    }

    if (*spec_cmd) {
        emit(cmd_spectrum(params, k, single_space(params, parse_nb(nb, 64))), out_path);
        return 0;
    }

    if (*sweep) {
        SweepConfig config;
        config.omega1 = omega1;
        config.alpha2 = alpha2;
        config.t_min = t_min;
        config.t_max = t_max;
        config.points = points;
        config.boson_cutoff = parse_nb(nb, 0);
        config.output_path = out_path.empty() ? "sweep.csv" : out_path;
        config.format = format == "json" ? SweepFormat::json : SweepFormat::csv;
        config.emit_plot = plot;
        config.tail_tolerance = tail_tolerance;

        const SweepResult result = cmd_thermal_sweep(config);
        std::cout << "wrote " << config.output_path << " (" << result.rows.size() << " rows)\n";
        if (plot) {
            std::cout << "wrote " << with_extension(config.output_path, "svg") << " and "
                      << with_extension(config.output_path, "dat") << "\n";
        }

        std::vector<ObservableRecord> unflagged;
        for (const ObservableRecord& r : result.rows) {
            if (r.flagged) {
                std::cerr << "warning: row at T/omega1 = " << r.T_over_omega1
                          << " flagged (tail mass " << r.tail_mass << " at N_b = " << r.N_b_used
                          << ")\n";
            } else {
                unflagged.push_back(r);
            }
        }
        if (!sweep_monotonic(unflagged)) {
            std::cerr << "thermal-sweep: monotonicity check failed on unflagged rows\n";
            return 1;
        }
        return 0;
    }

    if (*freq) {
        emit(cmd_frequencies(omega2, alpha2).dump(2) + "\n", out_path);
        return 0;  // the complex-root document is a handled outcome
    }

    if (*gold) {
        SweepConfig config;
        config.omega1 = omega1;
        config.alpha2 = alpha2;
        config.t_min = t_min;
        config.t_max = t_max;
        config.points = points;
        config.boson_cutoff = parse_nb(nb, 0);
        config.tail_tolerance = tail_tolerance;
        emit(goldstino_csv(run_thermal_sweep(config)), out_path);
        return 0;
    }

    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
