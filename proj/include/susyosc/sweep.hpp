// sweep.hpp — Temperature-sweep driver with a parallel worker pool, deterministic
// CSV/JSON serialization, self-rendered SVG plots, and the CLI command cores.

#pragma once

#include "susyosc/model.hpp"
#include "susyosc/thermal.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace susyosc {

inline constexpr const char* kEngineVersion = "1.0.0";
// Worker-pool size when SweepConfig::workers is 0 and the variable is set.
inline constexpr const char* kWorkerEnvVar = "SUSYOSC_WORKERS";

// --------------------------- configuration ----------------------------------

enum class SweepFormat { csv, json };

struct SweepConfig {
    double omega1 = 1.0;
    double alpha2 = 0.0;
    double t_min = 0.1;  // T/ω₁ grid endpoints, inclusive
    double t_max = 2.0;
    int points = 25;
    int boson_cutoff = 0;  // 0 → adaptive per row (start 32, double to 512, then flag)
    std::string output_path;  // empty → no file written (in-memory result only)
    SweepFormat format = SweepFormat::csv;
    bool emit_plot = false;
    double tail_tolerance = 1e-8;
    int workers = 0;  // 0 → environment variable, then hardware concurrency

    void validate() const;  // 0 < t_min < t_max, points ≥ 2, positive tolerances
    std::vector<double> temperature_grid() const;  // uniform, ascending
    ModelParams model_params() const { return ModelParams{omega1, alpha2}; }
};

struct SweepResult {
    SweepConfig config;
    std::string timestamp;  // ISO 8601 UTC, provenance only
    std::vector<ObservableRecord> rows;  // ascending in T/ω₁
};

// Explicit count, else the environment variable, else hardware concurrency.
int resolve_worker_count(int requested);

// Computes one observable record per grid temperature on a worker pool; rows
// are assembled in grid order regardless of completion order, so results are
// independent of the worker count.
SweepResult run_thermal_sweep(const SweepConfig& config);

// E₀/ω₁ non-decreasing and numeric Witten index non-increasing along rows.
bool sweep_monotonic(const std::vector<ObservableRecord>& rows);

// --------------------------- serialization ----------------------------------

// 17 significant digits — the shortest fixed precision that round-trips every
// IEEE-754 double exactly.
std::string format_double(double value);

void to_json(nlohmann::json& j, const ObservableRecord& record);

// Provenance as `#` comments (config echo + engine version on one line, the
// timestamp alone on the next so reruns differ only there), a column-name
// header, then one line per row.
std::string sweep_csv(const SweepResult& result);
// Inverse of sweep_csv for the numeric payload; numbers round-trip bit-exactly.
std::vector<ObservableRecord> parse_sweep_csv(const std::string& text);

nlohmann::json sweep_json(const SweepResult& result);

// Self-rendered SVG polyline chart of E₀/ω₁ vs T/ω₁ (numeric solid,
// closed form dashed) — no external plotting dependency.
std::string sweep_svg(const SweepResult& result);

// gnuplot-compatible whitespace-separated data file with a `#` column header.
std::string sweep_dat(const SweepResult& result);

// Per-row Goldstino norms as CSV (numeric vs closed form).
std::string goldstino_csv(const SweepResult& result);

// Replaces the final extension of path (or appends one) — used to derive plot
// file names from the output path.
std::string with_extension(const std::string& path, const std::string& extension);

void write_text_file(const std::string& path, const std::string& text);

// --------------------------- command cores ----------------------------------

// Full invariant suite: ladder algebra (raw and canonically transformed sets),
// SUSY exactness, the supercharge anticommutator identity H = ω₁{G_S, G_S†},
// and the quasiparticle reduction residual. tolerance_override > 0 replaces
// every per-check default; omega2_override > 0 builds a detuned Hamiltonian
// (the SUSY checks then fail — the documented negative control).
nlohmann::json cmd_verify(const ModelParams& params, const FockSpaceConfig& cfg,
                          double tolerance_override = 0.0, double omega2_override = 0.0);

// CSV of the lowest k eigenvalues grouped into degenerate levels.
std::string cmd_spectrum(const ModelParams& params, int k, const FockSpaceConfig& cfg);

// Runs the sweep and writes the configured outputs (CSV or JSON; SVG and
// gnuplot data when emit_plot).
SweepResult cmd_thermal_sweep(const SweepConfig& config);

// Frequency-condition roots, or a structured error document ({"error": ...})
// for complex-root and invalid inputs — handled outcomes, not exceptions.
nlohmann::json cmd_frequencies(double omega2, double alpha2);

}  // namespace susyosc
