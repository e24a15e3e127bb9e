#include "diskflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "diskflow/errors.hpp"
#include "diskflow/nonlinear_solver.hpp"
#include "diskflow/oracle.hpp"

namespace diskflow {

namespace {

template <typename... Args>
std::string strf(const char* fmt, Args... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, fmt, args...);
    return std::string(buf);
}

std::string trim(std::string s) {
    const auto notspace = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
    s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
    return s;
}

double parse_number(const std::string& key, const std::string& val, int lineno) {
    errno = 0;
    char* end = nullptr;
    const double x = std::strtod(val.c_str(), &end);
    if (val.empty() || end != val.c_str() + val.size() || errno == ERANGE || !std::isfinite(x)) {
        throw ConfigError(strf("config line %d: key '%s' expects a finite number, got '%s'",
                               lineno, key.c_str(), val.c_str()));
    }
    return x;
}

int parse_integer(const std::string& key, const std::string& val, int lineno) {
    errno = 0;
    char* end = nullptr;
    const long x = std::strtol(val.c_str(), &end, 10);
    if (val.empty() || end != val.c_str() + val.size() || errno == ERANGE
        || x < -2147483647L || x > 2147483647L) {
        throw ConfigError(strf("config line %d: key '%s' expects an integer, got '%s'",
                               lineno, key.c_str(), val.c_str()));
    }
    return static_cast<int>(x);
}

std::vector<std::string> split_list(const std::string& key, const std::string& val, int lineno) {
    std::vector<std::string> items;
    std::string cur;
    std::istringstream is(val);
    while (std::getline(is, cur, ',')) items.push_back(trim(cur));
    if (items.empty() || val.back() == ',') items.push_back("");
    for (const auto& it : items) {
        if (it.empty()) {
            throw ConfigError(strf("config line %d: key '%s' has an empty list entry",
                                   lineno, key.c_str()));
        }
    }
    return items;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    os << content;
    if (!os) throw ConfigError(strf("cannot write '%s'", path.c_str()));
}

}  // namespace

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

RunConfig parse_config(const std::string& text, RunConfig::Mode mode) {
    RunConfig cfg;
    cfg.mode = mode;
    bool has_alpha = false, has_gamma = false, has_rho = false;
    std::set<std::string> seen;

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(strf("config line %d: expected 'key = value', got '%s'", lineno,
                                   line.c_str()));
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(strf("config line %d: empty key", lineno));
        if (val.empty()) {
            throw ConfigError(strf("config line %d: key '%s' has an empty value", lineno,
                                   key.c_str()));
        }
        if (!seen.insert(key).second) {
            throw ConfigError(strf("config line %d: duplicate key '%s'", lineno, key.c_str()));
        }

        if (key == "alpha") {
            cfg.phys.alpha = parse_number(key, val, lineno);
            has_alpha = true;
        } else if (key == "gamma") {
            cfg.phys.gamma = parse_number(key, val, lineno);
            has_gamma = true;
        } else if (key == "rho") {
            cfg.solver.rho = parse_number(key, val, lineno);
            has_rho = true;
        } else if (key == "n_max") {
            cfg.solver.n_max = parse_integer(key, val, lineno);
        } else if (key == "r_max") {
            cfg.solver.r_max = parse_number(key, val, lineno);
        } else if (key == "m_nodes") {
            cfg.solver.m_nodes = parse_integer(key, val, lineno);
        } else if (key == "quad_tol") {
            cfg.solver.quad_tol = parse_number(key, val, lineno);
        } else if (key == "picard_tol") {
            cfg.solver.picard_tol = parse_number(key, val, lineno);
        } else if (key == "picard_max_iter") {
            cfg.solver.picard_max_iter = parse_integer(key, val, lineno);
        } else if (key == "delta") {
            cfg.solver.delta = parse_number(key, val, lineno);
        } else if (key == "c0") {
            cfg.solver.c0 = parse_number(key, val, lineno);
        } else if (key == "forcing.type") {
            if (val == "zero") {
                cfg.forcing.type = ForcingSpec::Type::zero;
            } else if (val == "power_law") {
                cfg.forcing.type = ForcingSpec::Type::power_law;
            } else if (val == "file") {
                cfg.forcing.type = ForcingSpec::Type::file;
            } else {
                throw ConfigError(strf(
                    "config line %d: forcing.type must be zero, power_law or file, got '%s'",
                    lineno, val.c_str()));
            }
        } else if (key == "forcing.n") {
            cfg.forcing.n = parse_integer(key, val, lineno);
        } else if (key == "forcing.amplitude") {
            cfg.forcing.amplitude = parse_number(key, val, lineno);
        } else if (key == "forcing.exponent") {
            cfg.forcing.exponent = parse_number(key, val, lineno);
        } else if (key == "forcing.path") {
            cfg.forcing.path = val;
        } else if (key == "output.dir") {
            cfg.output_dir = val;
        } else if (key == "sweep.alpha") {
            for (const auto& it : split_list(key, val, lineno)) {
                cfg.sweep_alpha.push_back(parse_number(key, it, lineno));
            }
        } else if (key == "sweep.gamma") {
            for (const auto& it : split_list(key, val, lineno)) {
                cfg.sweep_gamma.push_back(parse_number(key, it, lineno));
            }
        } else if (key == "sweep.rho") {
            for (const auto& it : split_list(key, val, lineno)) {
                cfg.sweep_rho.push_back(parse_number(key, it, lineno));
            }
        } else if (key == "sweep.forcing_n") {
            for (const auto& it : split_list(key, val, lineno)) {
                cfg.sweep_forcing_n.push_back(parse_integer(key, it, lineno));
            }
        } else {
            throw ConfigError(strf("config line %d: unknown config key '%s'", lineno,
                                   key.c_str()));
        }
    }

    if (!has_alpha) throw ConfigError("missing required key 'alpha'");
    if (!has_gamma) throw ConfigError("missing required key 'gamma'");
    if (!has_rho) throw ConfigError("missing required key 'rho'");

    cfg.phys.validate();
    cfg.solver.validate(cfg.phys, /*nonlinear=*/mode != RunConfig::Mode::verify);

    if (cfg.forcing.type == ForcingSpec::Type::power_law) {
        if (std::abs(cfg.forcing.n) > cfg.solver.n_max) {
            throw ConfigError(strf("forcing.n = %d exceeds the mode truncation n_max = %d",
                                   cfg.forcing.n, cfg.solver.n_max));
        }
        if (!(cfg.forcing.exponent > 1.0)) {
            throw ConfigError(strf("forcing.exponent = %.6g rejected: the forcing must decay "
                                   "(exponent > 1)", cfg.forcing.exponent));
        }
    }
    if (cfg.forcing.type == ForcingSpec::Type::file && cfg.forcing.path.empty()) {
        throw ConfigError("forcing.type = file requires forcing.path");
    }
    return cfg;
}

RunConfig load_config(const std::string& path, RunConfig::Mode mode) {
    std::ifstream isf(path, std::ios::binary);
    if (!isf) throw ConfigError(strf("cannot open config file '%s'", path.c_str()));
    std::ostringstream buf;
    buf << isf.rdbuf();
    return parse_config(buf.str(), mode);
}

// ---------------------------------------------------------------------------
// Forcing construction
// ---------------------------------------------------------------------------

FieldExpansion build_forcing(const RunConfig& cfg, const RadialGrid& grid) {
    FieldExpansion f(grid);
    switch (cfg.forcing.type) {
        case ForcingSpec::Type::zero:
            return f;
        case ForcingSpec::Type::power_law: {
            const int n = cfg.forcing.n;
            const double amp = cfg.forcing.amplitude;
            const double mu = cfg.forcing.exponent;
            if (n == 0) {
                ModeVector m0;
                m0.n = 0;
                m0.vr.assign(grid.size(), cplx(0.0));
                m0.vtheta.resize(grid.size());
                for (int i = 0; i < grid.size(); ++i) {
                    m0.vtheta[i] = amp * std::pow(grid.r(i), -mu);
                }
                f.set_mode(std::move(m0));
            } else {
                for (int sgn : {1, -1}) {
                    ModeVector mv;
                    mv.n = sgn * n;
                    mv.vr.assign(grid.size(), cplx(0.0));
                    mv.vtheta.resize(grid.size());
                    for (int i = 0; i < grid.size(); ++i) {
                        mv.vtheta[i] = 0.5 * amp * std::pow(grid.r(i), -mu);
                    }
                    f.set_mode(std::move(mv));
                }
            }
            return f;
        }
        case ForcingSpec::Type::file: {
            const ModeCsv mc = read_mode_csv(cfg.forcing.path);
            if (!mc.is_vector) {
                throw ConfigError(strf("forcing file '%s' holds a scalar profile; a vector "
                                       "mode (v_r, v_theta) is required",
                                       cfg.forcing.path.c_str()));
            }
            if (!mc.grid.compatible_with(grid)) {
                throw ConfigError(strf(
                    "forcing file '%s' grid (r_max=%.6g, %d nodes) does not match the "
                    "configured grid (r_max=%.6g, %d nodes)",
                    cfg.forcing.path.c_str(), mc.grid.r_max(), mc.grid.size(), grid.r_max(),
                    grid.size()));
            }
            const int n = mc.vector.n;
            if (std::abs(n) > cfg.solver.n_max) {
                throw ConfigError(strf("forcing file mode n=%d exceeds n_max=%d", n,
                                       cfg.solver.n_max));
            }
            f.set_mode(mc.vector);
            if (n != 0) {
                ModeVector conj_mode;
                conj_mode.n = -n;
                conj_mode.vr.resize(grid.size());
                conj_mode.vtheta.resize(grid.size());
                for (int i = 0; i < grid.size(); ++i) {
                    conj_mode.vr[i] = std::conj(mc.vector.vr[i]);
                    conj_mode.vtheta[i] = std::conj(mc.vector.vtheta[i]);
                }
                f.set_mode(std::move(conj_mode));
            }
            return f;
        }
    }
    throw ConfigError("unreachable forcing type");
}

// ---------------------------------------------------------------------------
// Emitted-artifact readers
// ---------------------------------------------------------------------------

std::vector<SweepRow> read_sweep_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("sweep csv: empty stream");
    const std::string header = "alpha,gamma,rho,forcing_n,status,iterations,final_ratio,"
                               "velocity_slope,vorticity_slope,final_norm";
    if (trim(line) != header) throw ConfigError("sweep csv: unexpected header '" + line + "'");
    std::vector<SweepRow> rows;
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cur;
        std::istringstream cs(line);
        while (std::getline(cs, cur, ',')) cells.push_back(cur);
        if (cells.size() != 10) {
            throw ConfigError(strf("sweep csv line %d: expected 10 cells, got %d", lineno,
                                   static_cast<int>(cells.size())));
        }
        SweepRow row;
        row.alpha = parse_number("alpha", cells[0], lineno);
        row.gamma = parse_number("gamma", cells[1], lineno);
        row.rho = parse_number("rho", cells[2], lineno);
        row.forcing_n = parse_integer("forcing_n", cells[3], lineno);
        row.status = cells[4];
        row.iterations = parse_integer("iterations", cells[5], lineno);
        row.final_ratio = parse_number("final_ratio", cells[6], lineno);
        row.velocity_slope = parse_number("velocity_slope", cells[7], lineno);
        row.vorticity_slope = parse_number("vorticity_slope", cells[8], lineno);
        row.final_norm = parse_number("final_norm", cells[9], lineno);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
    std::ifstream isf(path, std::ios::binary);
    if (!isf) throw ConfigError(strf("cannot open sweep csv '%s'", path.c_str()));
    return read_sweep_csv(isf);
}

ConvergenceRecord parse_convergence_log(const std::string& text) {
    ConvergenceRecord rec;
    std::istringstream is(text);
    std::string line;
    auto field = [](const std::string& s, const char* tag) -> std::string {
        const auto pos = s.find(tag);
        if (pos == std::string::npos) {
            throw ConfigError(strf("convergence log: missing field '%s'", tag));
        }
        const auto start = pos + std::strlen(tag);
        auto end = s.find(' ', start);
        if (end == std::string::npos) end = s.size();
        return s.substr(start, end - start);
    };
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("iter", 0) == 0) {
            rec.norm_history.push_back(parse_number("norm", field(line, "norm="), 0));
            rec.diff_history.push_back(parse_number("diff", field(line, "diff="), 0));
            const std::string ratio = field(line, "ratio=");
            if (ratio != "n/a") {
                rec.contraction_ratios.push_back(parse_number("ratio", ratio, 0));
            }
            rec.wall_ms.push_back(parse_number("wall_ms", field(line, "wall_ms="), 0));
        } else if (line.find("converged after") != std::string::npos) {
            rec.converged = line.rfind("not ", 0) != 0;
            std::istringstream ls(line.substr(line.find("after") + 6));
            ls >> rec.iterations;
        }
    }
    return rec;
}

// ---------------------------------------------------------------------------
// Run orchestration
// ---------------------------------------------------------------------------

namespace {

int run_verify(const RunConfig& cfg) {
    const VerificationReport rep = run_verification_suite(cfg.quick_verify);
    std::fputs(rep.to_text().c_str(), stdout);
    return rep.all_ok() ? 0 : 1;
}

int run_solve(const RunConfig& cfg) {
    const RadialGrid grid(cfg.solver.r_max, cfg.solver.m_nodes);
    const FieldExpansion f = build_forcing(cfg, grid);
    if (cfg.forcing.type == ForcingSpec::Type::power_law
        && cfg.forcing.exponent < 2.0 * cfg.solver.rho - 1.0) {
        std::fprintf(stdout,
                     "note: forcing exponent %.6g is below 2*rho-1 = %.6g; the run cannot "
                     "be certified\n",
                     cfg.forcing.exponent, 2.0 * cfg.solver.rho - 1.0);
    }
    const FullSolution sol = solve_ns(f, cfg.phys, cfg.solver);

    std::filesystem::create_directories(cfg.output_dir);
    write_text_file(cfg.output_dir + "/summary.json", run_summary_json(sol));
    write_text_file(cfg.output_dir + "/convergence.log", convergence_log(sol));
    for (const auto& [n, s] : sol.modes) {
        write_mode_csv(cfg.output_dir + strf("/velocity_mode_%d.csv", n), s.velocity, grid,
                       cfg.phys);
        write_mode_csv(cfg.output_dir + strf("/vorticity_mode_%d.csv", n), s.vorticity, grid,
                       cfg.phys);
        write_mode_csv(cfg.output_dir + strf("/pressure_mode_%d.csv", n), s.pressure, grid,
                       cfg.phys);
    }

    std::fputs(run_summary_json(sol).c_str(), stdout);
    for (const auto& w : sol.warnings) std::fprintf(stdout, "warning: %s\n", w.c_str());
    if (!sol.converged) {
        std::fputs("divergence report:\n", stdout);
        std::fputs(convergence_log(sol).c_str(), stdout);
        return 3;
    }
    std::fputs(asymptotics_report(sol).to_text().c_str(), stdout);
    return 0;
}

int run_sweep(const RunConfig& cfg) {
    const std::vector<double> alphas =
        cfg.sweep_alpha.empty() ? std::vector<double>{cfg.phys.alpha} : cfg.sweep_alpha;
    const std::vector<double> gammas =
        cfg.sweep_gamma.empty() ? std::vector<double>{cfg.phys.gamma} : cfg.sweep_gamma;
    const std::vector<double> rhos =
        cfg.sweep_rho.empty() ? std::vector<double>{cfg.solver.rho} : cfg.sweep_rho;
    const std::vector<int> ns = cfg.sweep_forcing_n.empty() ? std::vector<int>{cfg.forcing.n}
                                                            : cfg.sweep_forcing_n;

    std::string csv = "alpha,gamma,rho,forcing_n,status,iterations,final_ratio,"
                      "velocity_slope,vorticity_slope,final_norm\n";
    bool any_invalid = false, any_diverged = false, any_failed = false;
    for (double a : alphas) {
        for (double g : gammas) {
            for (double rh : rhos) {
                for (int n : ns) {
                    SweepRow row;
                    row.alpha = a;
                    row.gamma = g;
                    row.rho = rh;
                    row.forcing_n = n;
                    try {
                        RunConfig c = cfg;
                        c.phys.alpha = a;
                        c.phys.gamma = g;
                        c.solver.rho = rh;
                        c.forcing.n = n;
                        c.phys.validate();
                        c.solver.validate(c.phys, /*nonlinear=*/true);
                        if (c.forcing.type == ForcingSpec::Type::power_law
                            && std::abs(n) > c.solver.n_max) {
                            throw ConfigError("forcing mode exceeds n_max");
                        }
                        const RadialGrid grid(c.solver.r_max, c.solver.m_nodes);
                        const FieldExpansion f = build_forcing(c, grid);
                        const FullSolution sol = solve_ns(f, c.phys, c.solver);
                        const AsymptoticsReport asym = asymptotics_report(sol);
                        row.status = sol.converged ? "ok" : "not_converged";
                        row.iterations = sol.picard.iterations;
                        row.final_ratio = sol.picard.contraction_ratios.empty()
                                              ? 0.0
                                              : sol.picard.contraction_ratios.back();
                        row.velocity_slope =
                            asym.background_only ? 0.0 : asym.velocity_slope.slope;
                        row.vorticity_slope =
                            asym.background_only ? 0.0 : asym.vorticity_slope.slope;
                        row.final_norm = sol.picard.norm_history.empty()
                                             ? 0.0
                                             : sol.picard.norm_history.back();
                        if (!sol.converged) any_diverged = true;
                    } catch (const ConfigError&) {
                        row.status = "invalid";
                        any_invalid = true;
                    } catch (const Error&) {
                        row.status = "failed";
                        any_failed = true;
                    }
                    csv += strf("%.17g,%.17g,%.17g,%d,%s,%d,%.17g,%.17g,%.17g,%.17g\n",
                                row.alpha, row.gamma, row.rho, row.forcing_n,
                                row.status.c_str(), row.iterations, row.final_ratio,
                                row.velocity_slope, row.vorticity_slope, row.final_norm);
                }
            }
        }
    }
    std::filesystem::create_directories(cfg.output_dir);
    write_text_file(cfg.output_dir + "/sweep.csv", csv);
    std::fputs(csv.c_str(), stdout);
    if (any_failed) return 4;
    if (any_diverged) return 3;
    if (any_invalid) return 2;
    return 0;
}

}  // namespace

int run(const RunConfig& cfg) {
    switch (cfg.mode) {
        case RunConfig::Mode::verify:
            return run_verify(cfg);
        case RunConfig::Mode::solve:
            return run_solve(cfg);
        case RunConfig::Mode::sweep:
            return run_sweep(cfg);
    }
    throw ConfigError("unreachable run mode");
}

}  // namespace diskflow
