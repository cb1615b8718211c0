// sweep.cpp — Sweep driver, serialization, plotting, and CLI command cores.

#include "susyosc/sweep.hpp"

#include "susyosc/algebra.hpp"
#include "susyosc/bogoliubov.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <chrono>
#include <ctime>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

namespace susyosc {

// --------------------------- configuration ----------------------------------

void SweepConfig::validate() const {
    model_params().validate();
    if (!(t_min > 0.0) || !(t_max > t_min) || !std::isfinite(t_max)) {
        throw std::invalid_argument("SweepConfig: requires 0 < t_min < t_max, finite");
    }
    if (points < 2) {
        throw std::invalid_argument("SweepConfig: points must be >= 2");
    }
    if (boson_cutoff < 0) {
        throw std::invalid_argument("SweepConfig: boson_cutoff must be >= 0 (0 = adaptive)");
    }
    if (!(tail_tolerance > 0.0)) {
        throw std::invalid_argument("SweepConfig: tail_tolerance must be positive");
    }
    if (workers < 0) {
        throw std::invalid_argument("SweepConfig: workers must be >= 0 (0 = auto)");
    }
}

std::vector<double> SweepConfig::temperature_grid() const {
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double step = (t_max - t_min) / (points - 1);
    for (int i = 0; i < points; ++i) {
        grid[static_cast<std::size_t>(i)] = t_min + step * i;
    }
    grid.back() = t_max;  // endpoint exact regardless of rounding
    return grid;
}

int resolve_worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv(kWorkerEnvVar)) {
        char* end = nullptr;
        const long parsed = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && parsed > 0 && parsed < 1024) {
            return static_cast<int>(parsed);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// --------------------------- sweep driver -----------------------------------

namespace {

std::string iso_timestamp_utc() {
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

}  // namespace

SweepResult run_thermal_sweep(const SweepConfig& config) {
    config.validate();
    const std::vector<double> grid = config.temperature_grid();

    SweepResult result;
    result.config = config;
    result.timestamp = iso_timestamp_utc();
    result.rows.resize(grid.size());

    ThermalOptions options;
    options.boson_cutoff = config.boson_cutoff;
    options.tail_tolerance = config.tail_tolerance;
    const ModelParams params = config.model_params();

    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto work = [&]() {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            try {
                const double beta = 1.0 / (grid[i] * config.omega1);
                result.rows[i] = compute_observables(params, beta, options);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };

    const int workers =
        std::min<int>(resolve_worker_count(config.workers), static_cast<int>(grid.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return result;
}

bool sweep_monotonic(const std::vector<ObservableRecord>& rows) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].E0_over_omega1 < rows[i - 1].E0_over_omega1) return false;
        if (rows[i].witten_numeric > rows[i - 1].witten_numeric) return false;
    }
    return true;
}

// --------------------------- serialization ----------------------------------

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

void to_json(nlohmann::json& j, const ObservableRecord& record) {
    j = nlohmann::json{{"beta", record.beta},
                       {"T_over_omega1", record.T_over_omega1},
                       {"E0_over_omega1", record.E0_over_omega1},
                       {"E0_closed_form", record.E0_closed_form},
                       {"gibbs_oracle", record.gibbs_oracle},
                       {"witten_numeric", record.witten_numeric},
                       {"witten_closed_form", record.witten_closed_form},
                       {"goldstino_norm_numeric", record.goldstino_norm_numeric},
                       {"goldstino_norm_closed_form", record.goldstino_norm_closed_form},
                       {"N_b_used", record.N_b_used},
                       {"tail_mass", record.tail_mass},
                       {"flagged", record.flagged}};
}

namespace {

constexpr const char* kCsvHeader =
    "beta,T_over_omega1,E0_over_omega1,E0_closed_form,gibbs_oracle,witten_numeric,"
    "witten_closed_form,goldstino_norm_numeric,goldstino_norm_closed_form,N_b_used,"
    "tail_mass,flagged";

std::string provenance_line(const char* command, const SweepConfig& config) {
    std::string line = std::string("# ") + command + " engine=" + kEngineVersion;
    line += " omega1=" + format_double(config.omega1);
    line += " alpha2=" + format_double(config.alpha2);
    line += " tmin=" + format_double(config.t_min);
    line += " tmax=" + format_double(config.t_max);
    line += " points=" + std::to_string(config.points);
    line += " nb=" +
            (config.boson_cutoff == 0 ? std::string("auto") : std::to_string(config.boson_cutoff));
    line += " tolerance=" + format_double(config.tail_tolerance);
    return line;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_double(const std::string& field) {
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0') {
        throw std::invalid_argument("parse_sweep_csv: bad numeric field '" + field + "'");
    }
    return value;
}

int parse_int(const std::string& field) {
    char* end = nullptr;
    const long value = std::strtol(field.c_str(), &end, 10);
    if (end == field.c_str() || *end != '\0') {
        throw std::invalid_argument("parse_sweep_csv: bad integer field '" + field + "'");
    }
    return static_cast<int>(value);
}

}  // namespace

std::string sweep_csv(const SweepResult& result) {
    std::string out = provenance_line("thermal-sweep", result.config) + "\n";
    out += "# timestamp: " + result.timestamp + "\n";
    out += std::string(kCsvHeader) + "\n";
    for (const ObservableRecord& r : result.rows) {
        out += format_double(r.beta) + "," + format_double(r.T_over_omega1) + "," +
               format_double(r.E0_over_omega1) + "," + format_double(r.E0_closed_form) + "," +
               format_double(r.gibbs_oracle) + "," + format_double(r.witten_numeric) + "," +
               format_double(r.witten_closed_form) + "," +
               format_double(r.goldstino_norm_numeric) + "," +
               format_double(r.goldstino_norm_closed_form) + "," +
               std::to_string(r.N_b_used) + "," + format_double(r.tail_mass) + "," +
               (r.flagged ? "1" : "0") + "\n";
    }
    return out;
}

std::vector<ObservableRecord> parse_sweep_csv(const std::string& text) {
    std::vector<ObservableRecord> rows;
    bool header_seen = false;
    for (std::string line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != kCsvHeader) {
                throw std::invalid_argument("parse_sweep_csv: unexpected column header");
            }
            header_seen = true;
            continue;
        }
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 12) {
            throw std::invalid_argument("parse_sweep_csv: expected 12 fields per row");
        }
        ObservableRecord r;
        r.beta = parse_double(f[0]);
        r.T_over_omega1 = parse_double(f[1]);
        r.E0_over_omega1 = parse_double(f[2]);
        r.E0_closed_form = parse_double(f[3]);
        r.gibbs_oracle = parse_double(f[4]);
        r.witten_numeric = parse_double(f[5]);
        r.witten_closed_form = parse_double(f[6]);
        r.goldstino_norm_numeric = parse_double(f[7]);
        r.goldstino_norm_closed_form = parse_double(f[8]);
        r.N_b_used = parse_int(f[9]);
        r.tail_mass = parse_double(f[10]);
        r.flagged = parse_int(f[11]) != 0;
        rows.push_back(r);
    }
    if (!header_seen) {
        throw std::invalid_argument("parse_sweep_csv: no column header found");
    }
    return rows;
}

nlohmann::json sweep_json(const SweepResult& result) {
    nlohmann::json j;
    j["provenance"] = {{"engine", kEngineVersion},
                       {"timestamp", result.timestamp},
                       {"config",
                        {{"omega1", result.config.omega1},
                         {"alpha2", result.config.alpha2},
                         {"t_min", result.config.t_min},
                         {"t_max", result.config.t_max},
                         {"points", result.config.points},
                         {"boson_cutoff", result.config.boson_cutoff},
                         {"tail_tolerance", result.config.tail_tolerance}}}};
    j["rows"] = result.rows;
    return j;
}

// --------------------------- plotting ---------------------------------------

std::string sweep_svg(const SweepResult& result) {
    if (result.rows.size() < 2) {
        throw std::invalid_argument("sweep_svg: need at least two rows");
    }
    const double width = 720.0, height = 480.0;
    const double ml = 84.0, mr = 24.0, mt = 24.0, mb = 64.0;

    const double xmin = result.rows.front().T_over_omega1;
    double xmax = result.rows.back().T_over_omega1;
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    double ymax = 0.0;
    for (const ObservableRecord& r : result.rows) {
        ymax = std::max({ymax, r.E0_over_omega1, r.E0_closed_form});
    }
    ymax = ymax > 0.0 ? 1.08 * ymax : 1.0;

    const auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    const auto py = [&](double y) { return height - mb - y / ymax * (height - mt - mb); };
    const auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.2f", v);
        return std::string(buf);
    };
    const auto label = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.4g", v);
        return std::string(buf);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";

    const int ticks = 5;
    for (int i = 0; i < ticks; ++i) {
        const double x = xmin + (xmax - xmin) * i / (ticks - 1);
        const double y = ymax * i / (ticks - 1);
        svg << "  <line x1=\"" << num(px(x)) << "\" y1=\"" << num(py(0.0)) << "\" x2=\""
            << num(px(x)) << "\" y2=\"" << num(py(ymax)) << "\" stroke=\"#dddddd\"/>\n";
        svg << "  <line x1=\"" << num(px(xmin)) << "\" y1=\"" << num(py(y)) << "\" x2=\""
            << num(px(xmax)) << "\" y2=\"" << num(py(y)) << "\" stroke=\"#dddddd\"/>\n";
        svg << "  <text x=\"" << num(px(x)) << "\" y=\"" << num(height - mb + 20.0)
            << "\" font-size=\"12\" text-anchor=\"middle\">" << label(x) << "</text>\n";
        svg << "  <text x=\"" << num(ml - 8.0) << "\" y=\"" << num(py(y) + 4.0)
            << "\" font-size=\"12\" text-anchor=\"end\">" << label(y) << "</text>\n";
    }
    svg << "  <line x1=\"" << num(ml) << "\" y1=\"" << num(py(0.0)) << "\" x2=\""
        << num(width - mr) << "\" y2=\"" << num(py(0.0)) << "\" stroke=\"black\"/>\n";
    svg << "  <line x1=\"" << num(ml) << "\" y1=\"" << num(py(0.0)) << "\" x2=\"" << num(ml)
        << "\" y2=\"" << num(mt) << "\" stroke=\"black\"/>\n";

    const auto polyline = [&](bool closed_form, const char* color, const char* dash) {
        svg << "  <polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
        if (dash[0] != '\0') svg << " stroke-dasharray=\"" << dash << "\"";
        svg << " points=\"";
        for (const ObservableRecord& r : result.rows) {
            const double y = closed_form ? r.E0_closed_form : r.E0_over_omega1;
            svg << num(px(r.T_over_omega1)) << "," << num(py(y)) << " ";
        }
        svg << "\"/>\n";
    };
    polyline(false, "#1f77b4", "");
    polyline(true, "#d62728", "7,5");

    svg << "  <text x=\"" << num((ml + width - mr) / 2.0) << "\" y=\"" << num(height - 16.0)
        << "\" font-size=\"14\" text-anchor=\"middle\">T / omega1</text>\n";
    svg << "  <text x=\"20\" y=\"" << num((mt + height - mb) / 2.0)
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << num((mt + height - mb) / 2.0) << ")\">E0 / omega1</text>\n";

    svg << "  <line x1=\"" << num(ml + 14.0) << "\" y1=\"" << num(mt + 14.0) << "\" x2=\""
        << num(ml + 50.0) << "\" y2=\"" << num(mt + 14.0)
        << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n";
    svg << "  <text x=\"" << num(ml + 58.0) << "\" y=\"" << num(mt + 18.0)
        << "\" font-size=\"12\">numeric (TFD vacuum)</text>\n";
    svg << "  <line x1=\"" << num(ml + 14.0) << "\" y1=\"" << num(mt + 34.0) << "\" x2=\""
        << num(ml + 50.0) << "\" y2=\"" << num(mt + 34.0)
        << "\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"7,5\"/>\n";
    svg << "  <text x=\"" << num(ml + 58.0) << "\" y=\"" << num(mt + 38.0)
        << "\" font-size=\"12\">closed form</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

std::string sweep_dat(const SweepResult& result) {
    std::string out =
        "# T_over_omega1 E0_over_omega1 E0_closed_form witten_numeric witten_closed_form "
        "goldstino_norm_numeric goldstino_norm_closed_form\n";
    for (const ObservableRecord& r : result.rows) {
        out += format_double(r.T_over_omega1) + " " + format_double(r.E0_over_omega1) + " " +
               format_double(r.E0_closed_form) + " " + format_double(r.witten_numeric) + " " +
               format_double(r.witten_closed_form) + " " +
               format_double(r.goldstino_norm_numeric) + " " +
               format_double(r.goldstino_norm_closed_form) + "\n";
    }
    return out;
}

std::string goldstino_csv(const SweepResult& result) {
    std::string out = provenance_line("goldstino", result.config) + "\n";
    out += "# timestamp: " + result.timestamp + "\n";
    out += "beta,T_over_omega1,goldstino_norm_numeric,goldstino_norm_closed_form,N_b_used\n";
    for (const ObservableRecord& r : result.rows) {
        out += format_double(r.beta) + "," + format_double(r.T_over_omega1) + "," +
               format_double(r.goldstino_norm_numeric) + "," +
               format_double(r.goldstino_norm_closed_form) + "," + std::to_string(r.N_b_used) +
               "\n";
    }
    return out;
}

std::string with_extension(const std::string& path, const std::string& extension) {
    const std::size_t slash = path.find_last_of('/');
    const std::size_t dot = path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return path + "." + extension;
    }
    return path.substr(0, dot + 1) + extension;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_text_file: cannot open '" + path + "'");
    }
    out << text;
    if (!out) {
        throw std::runtime_error("write_text_file: write failed for '" + path + "'");
    }
}

// --------------------------- command cores ----------------------------------

namespace {

nlohmann::json tagged_report(const AlgebraReport& report, const char* suite) {
    nlohmann::json j = report;
    j["suite"] = suite;
    return j;
}

}  // namespace

nlohmann::json cmd_verify(const ModelParams& params, const FockSpaceConfig& cfg,
                          double tolerance_override, double omega2_override) {
    const double algebra_tol = tolerance_override > 0.0 ? tolerance_override : 1e-10;
    const double exactness_tol = tolerance_override > 0.0 ? tolerance_override : 1e-9;

    const HamiltonianBundle bundle =
        omega2_override > 0.0 ? build_detuned_model(params, omega2_override, cfg)
                              : build_interacting_model(params, cfg);
    nlohmann::json checks = nlohmann::json::array();
    bool all = true;
    const auto add = [&](const nlohmann::json& entry) {
        checks.push_back(entry);
        all = all && entry.at("passed").get<bool>();
    };

    const auto [a, a_dag] = build_boson_ladder(cfg);
    const auto [b, b_dag] = build_fermion_ladder(cfg);
    for (const AlgebraReport& r : verify_full_algebra({a, a_dag, b, b_dag}, cfg, algebra_tol)) {
        add(tagged_report(r, "ladder_algebra"));
    }

    const TransformedModes modes =
        canonical_transform(params, cfg, FermionModePolicy::materialize);
    for (const AlgebraReport& r : verify_full_algebra(
             {modes.a2, modes.a2_dagger, modes.b2, modes.b2_dagger}, cfg, algebra_tol)) {
        add(tagged_report(r, "transformed_algebra"));
    }

    const SusyExactnessReport exactness = check_susy_exactness(bundle, exactness_tol);
    add(tagged_report(exactness.commutator, "susy_exactness"));
    add(tagged_report(exactness.ground_annihilation, "susy_exactness"));

    AlgebraReport anti;
    anti.relation_name = "H = omega1 * (G_S bullet G_S_dag) * 2";
    anti.tolerance = exactness_tol;
    anti.max_deviation = guarded_norm(
        SparseMatrix(bundle.H -
                     params.omega1 * (SparseMatrix(bundle.G_S * bundle.G_S_dagger) +
                                      SparseMatrix(bundle.G_S_dagger * bundle.G_S))),
        cfg);
    anti.passed = anti.max_deviation < anti.tolerance;
    anti.subspace_dim = static_cast<Eigen::Index>(guarded_indices(cfg).size());
    add(tagged_report(anti, "supercharge_anticommutator"));

    const auto [h_reduced, residual] = reduce_hamiltonian(bundle, modes);
    AlgebraReport reduction;
    reduction.relation_name = "H = omega1 * (a2_dag a2 + b2_dag b2)";
    reduction.tolerance = exactness_tol;
    reduction.max_deviation = residual;
    reduction.passed = residual < reduction.tolerance;
    reduction.subspace_dim = anti.subspace_dim;
    add(tagged_report(reduction, "reduction"));

    nlohmann::json j;
    j["engine"] = kEngineVersion;
    j["params"] = {{"omega1", params.omega1},
                   {"alpha2", params.alpha2},
                   {"omega2", bundle.omega2}};
    j["space"] = {{"boson_cutoff", cfg.boson_cutoff}, {"guard_band", cfg.guard()}};
    j["ground_energy"] = exactness.ground_energy;
    j["checks"] = checks;
    j["all_passed"] = all;
    nlohmann::json notes = nlohmann::json::array();
    if (params.alpha2 == 0.0) {
        notes.push_back("identity mode transformation branch (alpha2 = 0)");
    }
    if (omega2_override > 0.0) {
        notes.push_back("detuned omega2 (SUSY frequency condition not imposed)");
    }
    j["notes"] = notes;
    return j;
}

std::string cmd_spectrum(const ModelParams& params, int k, const FockSpaceConfig& cfg) {
    const HamiltonianBundle bundle = build_interacting_model(params, cfg);
    const std::vector<EnergyLevel> levels = spectrum(bundle, k);

    std::string out = "# spectrum engine=" + std::string(kEngineVersion) +
                      " omega1=" + format_double(params.omega1) +
                      " alpha2=" + format_double(params.alpha2) +
                      " boson_cutoff=" + std::to_string(cfg.boson_cutoff) +
                      " k=" + std::to_string(k) + "\n";
    out += "index,eigenvalue,multiplicity\n";
    for (std::size_t i = 0; i < levels.size(); ++i) {
        out += std::to_string(i) + "," + format_double(levels[i].energy) + "," +
               std::to_string(levels[i].multiplicity) + "\n";
    }
    return out;
}

SweepResult cmd_thermal_sweep(const SweepConfig& config) {
    if (config.emit_plot && config.output_path.empty()) {
        throw std::invalid_argument("cmd_thermal_sweep: emit_plot requires an output path");
    }
    const SweepResult result = run_thermal_sweep(config);
    if (!config.output_path.empty()) {
        if (config.format == SweepFormat::csv) {
            write_text_file(config.output_path, sweep_csv(result));
        } else {
            write_text_file(config.output_path, sweep_json(result).dump(2) + "\n");
        }
        if (config.emit_plot) {
            write_text_file(with_extension(config.output_path, "svg"), sweep_svg(result));
            write_text_file(with_extension(config.output_path, "dat"), sweep_dat(result));
        }
    }
    return result;
}

nlohmann::json cmd_frequencies(double omega2, double alpha2) {
    try {
        const FrequencySolution solution = solve_frequencies(omega2, alpha2);
        return solution;
    } catch (const std::domain_error& e) {
        return nlohmann::json{{"error", "complex_roots"},
                              {"message", e.what()},
                              {"omega2", omega2},
                              {"alpha2", alpha2}};
    } catch (const std::invalid_argument& e) {
        return nlohmann::json{{"error", "invalid_parameters"},
                              {"message", e.what()},
                              {"omega2", omega2},
                              {"alpha2", alpha2}};
    }
}

}  // namespace susyosc
