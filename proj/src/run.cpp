#include "ogp/run.hpp"

#include "ogp/format.hpp"
#include "ogp/interferometer.hpp"
#include "ogp/phases.hpp"
#include "ogp/presets.hpp"
#include "ogp/selftest.hpp"

#include <json.hpp>

#include <atomic>
#include <fstream>
#include <iostream>
#include <thread>

namespace ogp {

using nlohmann::json;

namespace {

std::string hash_string(std::uint64_t h) {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string csv_provenance(const ExperimentConfig& cfg) {
    std::string out = "# config_hash=" + hash_string(config_hash(cfg)) + "\n";
    out += "# mode=" + to_string(cfg.mode) + " grid_steps=" + std::to_string(cfg.grid_steps) +
           " nodal_tol=" + format_sig17(cfg.nodal_tol) +
           " seed=" + (cfg.seed ? std::to_string(*cfg.seed) : std::string("none")) + "\n";
    return out;
}

json json_provenance(const ExperimentConfig& cfg) {
    json p;
    p["config_hash"] = hash_string(config_hash(cfg));
    p["mode"] = to_string(cfg.mode);
    p["grid_steps"] = cfg.grid_steps;
    p["nodal_tol"] = cfg.nodal_tol;
    if (cfg.seed) p["seed"] = *cfg.seed;
    return p;
}

json phase_json(const PhaseResult& r) {
    json j;
    j["defined"] = r.defined;
    j["phase"] = {{"re", r.phase.real()}, {"im", r.phase.imag()}};
    j["arg"] = r.arg();
    j["magnitude"] = r.magnitude;
    j["raw_trace"] = {{"re", r.raw_trace.real()}, {"im", r.raw_trace.imag()}};
    return j;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file " + path.string());
    out << content;
    if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::filesystem::path emit_json(const std::filesystem::path& dir, const std::string& name,
                                const json& doc) {
    const auto path = dir / name;
    write_file(path, doc.dump(2) + "\n");
    return path;
}

std::string interferogram_csv(const ExperimentConfig& cfg,
                              const std::vector<InterferogramPoint>& points) {
    std::string out = csv_provenance(cfg) + "chi,intensity\n";
    for (const auto& p : points) out += format_sig17(p.chi) + "," + format_sig17(p.intensity) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// per-mode runners
// ---------------------------------------------------------------------------

RunOutcome run_phase_modes(const ExperimentConfig& cfg, const RunOptions& opts) {
    const UnitaryPath path = build_path(cfg);
    const OrthonormalBasis basis = build_basis(cfg);
    const TimeGrid grid = TimeGrid::uniform(cfg.grid_steps, path.duration());
    const IndexTuple idx(cfg.indices);

    json doc;
    PhaseResult value;
    if (cfg.mode == RunMode::pure) {
        const auto res = pure_offdiagonal_phase(path, basis, idx, grid, cfg.nodal_tol);
        value = res.value;
        doc["link_magnitudes"] = res.link_magnitudes;
    } else {
        const SpectralDecomposition rho = build_state(cfg);
        value = (cfg.mode == RunMode::mixed)
                    ? mixed_offdiagonal_phase_nondeg(path, rho, basis, idx, grid, cfg.nodal_tol)
                    : mixed_offdiagonal_phase_degenerate(path, rho, basis, idx, grid, cfg.nodal_tol);
    }
    doc["mode"] = to_string(cfg.mode);
    doc["result"] = phase_json(value);
    doc["provenance"] = json_provenance(cfg);

    RunOutcome out;
    out.artifacts.push_back(emit_json(opts.out_dir, "result.json", doc));
    if (cfg.require_defined && !value.defined) {
        out.exit_code = exit_undefined_phase;
        out.message = "phase undefined at the requested point";
    }
    return out;
}

RunOutcome run_pseudopure_closed(const ExperimentConfig& cfg, const RunOptions& opts) {
    const PseudopureParams& p = *cfg.params;
    const PhaseResult g1 = gamma1_closed(p, cfg.nodal_tol);
    const PhaseResult g1m = gamma1_closed(p, cfg.nodal_tol, PairMember::m);
    const PhaseResult g2 = gamma2_closed(p, cfg.nodal_tol);

    json doc;
    doc["mode"] = to_string(cfg.mode);
    doc["params"] = {{"N", p.n_dim}, {"epsilon", p.epsilon}, {"eta", p.eta}, {"omega", p.solid_angle}};
    doc["gamma1"] = phase_json(g1);
    doc["gamma1_partner"] = phase_json(g1m);
    doc["gamma2"] = phase_json(g2);
    doc["gamma2_argument"] = gamma2_argument(p);
    doc["l1_nodal_residual"] = l1_nodal_residual(p);
    doc["provenance"] = json_provenance(cfg);

    RunOutcome out;
    out.artifacts.push_back(emit_json(opts.out_dir, "result.json", doc));
    if (cfg.require_defined && (!g1.defined || !g2.defined)) {
        out.exit_code = exit_undefined_phase;
        out.message = "closed-form phase undefined at the requested point";
    }
    return out;
}

RunOutcome run_nodal_scan(const ExperimentConfig& cfg, const RunOptions& opts) {
    const auto& sc = cfg.scan;
    const auto value_at = [](const ScanRange& r, int i) {
        return (r.points == 1) ? r.min : r.min + (r.max - r.min) * i / (r.points - 1);
    };

    // rows are produced concurrently but assembled in cell order
    std::vector<std::string> rows(sc.epsilon.points);
    std::atomic<int> next{0};
    const int workers = std::max(1, std::min(opts.workers, sc.epsilon.points));
    auto work = [&] {
        for (int i = next.fetch_add(1); i < sc.epsilon.points; i = next.fetch_add(1)) {
            const double eps = value_at(sc.epsilon, i);
            std::string& row = rows[i];
            for (int j = 0; j < sc.eta.points; ++j) {
                const double eta = value_at(sc.eta, j);
                PseudopureParams p{cfg.dimension, eps, eta, sc.omega};
                row += format_sig17(eps) + "," + format_sig17(eta) + "," +
                       format_sig17(l1_nodal_residual(p)) + "," + format_sig17(gamma2_argument(p)) + "\n";
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    std::string csv = csv_provenance(cfg) + "epsilon,eta,l1_residual,gamma2_argument\n";
    for (const auto& row : rows) csv += row;

    RunOutcome out;
    const auto path = opts.out_dir / "scan.csv";
    write_file(path, csv);
    out.artifacts.push_back(path);
    return out;
}

RunOutcome run_figure1(const ExperimentConfig& cfg, const RunOptions& opts) {
    std::vector<double> grid(cfg.figure1.eta_points);
    for (int i = 0; i < cfg.figure1.eta_points; ++i)
        grid[i] = static_cast<double>(i) / (cfg.figure1.eta_points - 1);
    const Figure1Data data = figure1_data(cfg.figure1.dims, grid);

    RunOutcome out;
    const auto path = opts.out_dir / "figure1.csv";
    write_file(path, csv_provenance(cfg) + figure1_csv(data));
    out.artifacts.push_back(path);
    return out;
}

RunOutcome run_interfere(const ExperimentConfig& cfg, const RunOptions& opts) {
    const int n_dim = cfg.dimension;
    const auto& pp = *cfg.state->pseudopure;
    const int n = pp.n, m = cfg.interfere.m;
    if (n == m) throw PhysicsError("interfere: state index n and partner m must differ");

    const UnitaryPath path = build_path(cfg);
    const TimeGrid grid = TimeGrid::uniform(cfg.grid_steps, path.duration());

    const SpectralDecomposition rho_n = pseudopure_density(n_dim, pp.epsilon, n);
    const ParallelFamily family = build_parallel_family(path, rho_n, grid);
    const auto ops = pseudopure_measurement_operators(n_dim, n, m, family.u);
    const Purification psi = purify_pseudopure(n_dim, pp.epsilon, n);
    const auto chis = uniform_chi_grid(cfg.interfere.chi_points);

    const auto two_arm = interferogram(psi, ops.u_s, ops.u_a, ops.v_s, ops.v_a, chis);
    const auto conditional = conditional_circuit_readout(psi, ops.u_s, ops.u_a, ops.v_s, ops.v_a, chis);
    const auto fit_two = fit_interferogram(two_arm);
    const auto fit_cond = fit_interferogram(conditional);

    // engine value of the same l=2 trace, for the agreement record
    const SpectralDecomposition rho_base = pseudopure_density(n_dim, pp.epsilon, 0);
    const PhaseResult engine = mixed_offdiagonal_phase_degenerate(
        path, rho_base, OrthonormalBasis::computational(n_dim), IndexTuple({n, m}), grid, cfg.nodal_tol);

    double max_ratio_residual = 0.0;
    for (std::size_t i = 0; i < two_arm.size(); ++i)
        max_ratio_residual =
            std::max(max_ratio_residual, std::abs(conditional[i].intensity - 0.25 * two_arm[i].intensity));

    const auto fit_json = [](const InterferogramFit& f) {
        return json{{"shift", f.shift}, {"visibility", f.visibility}, {"mean", f.mean}, {"defined", f.defined}};
    };
    const Complex cross = interference_cross_term(psi, ops.u_s, ops.u_a, ops.v_s, ops.v_a);
    json doc;
    doc["mode"] = to_string(cfg.mode);
    doc["two_arm_fit"] = fit_json(fit_two);
    doc["conditional_fit"] = fit_json(fit_cond);
    doc["engine"] = phase_json(engine);
    doc["cross_term"] = {{"re", cross.real()}, {"im", cross.imag()}};
    doc["conditional_ratio_residual"] = max_ratio_residual;
    doc["provenance"] = json_provenance(cfg);

    RunOutcome out;
    const auto two_path = opts.out_dir / "interferogram.csv";
    const auto cond_path = opts.out_dir / "conditional.csv";
    write_file(two_path, interferogram_csv(cfg, two_arm));
    write_file(cond_path, interferogram_csv(cfg, conditional));
    out.artifacts.push_back(two_path);
    out.artifacts.push_back(cond_path);
    out.artifacts.push_back(emit_json(opts.out_dir, "fit.json", doc));
    if (cfg.require_defined && !fit_two.defined) {
        out.exit_code = exit_undefined_phase;
        out.message = "interference contrast vanishes (nodal configuration)";
    }
    return out;
}

RunOutcome run_selftest_mode(const ExperimentConfig& cfg, const RunOptions& opts) {
    const SelftestReport report = run_selftest(*cfg.seed);
    json doc;
    doc["mode"] = "selftest";
    doc["provenance"] = json_provenance(cfg);
    json cases = json::array();
    for (const auto& c : report.cases) {
        std::cout << (c.passed ? "PASS" : "FAIL") << " " << c.name << " (metric " << c.metric
                  << ", bound " << c.bound << ")\n";
        cases.push_back({{"name", c.name}, {"passed", c.passed}, {"metric", c.metric}, {"bound", c.bound}});
    }
    doc["cases"] = cases;
    doc["failures"] = report.failures();
    std::cout << (report.cases.size() - report.failures()) << "/" << report.cases.size()
              << " selftest checks passed\n";

    RunOutcome out;
    out.artifacts.push_back(emit_json(opts.out_dir, "selftest.json", doc));
    if (report.failures() > 0) {
        out.exit_code = exit_selftest_failure;
        out.message = std::to_string(report.failures()) + " selftest checks failed";
    }
    return out;
}

}  // namespace

RunOutcome run(ExperimentConfig cfg, const RunOptions& opts) {
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.grid_steps) cfg.grid_steps = *opts.grid_steps;
    if (opts.nodal_tol) cfg.nodal_tol = *opts.nodal_tol;

    RunOutcome out;
    try {
        std::filesystem::create_directories(opts.out_dir);
        switch (cfg.mode) {
            case RunMode::pure:
            case RunMode::mixed:
            case RunMode::degenerate: out = run_phase_modes(cfg, opts); break;
            case RunMode::pseudopure_closed: out = run_pseudopure_closed(cfg, opts); break;
            case RunMode::nodal_scan: out = run_nodal_scan(cfg, opts); break;
            case RunMode::figure1: out = run_figure1(cfg, opts); break;
            case RunMode::interfere: out = run_interfere(cfg, opts); break;
            case RunMode::selftest: {
                if (!cfg.seed)
                    throw ConfigError("selftest uses randomness; provide a seed via config or --seed");
                out = run_selftest_mode(cfg, opts);
                break;
            }
        }
    } catch (const ConfigError& e) {
        out.exit_code = exit_validation;
        out.message = e.what();
    } catch (const PhysicsError& e) {
        out.exit_code = exit_validation;
        out.message = e.what();
    } catch (const std::invalid_argument& e) {
        out.exit_code = exit_validation;
        out.message = e.what();
    } catch (const std::domain_error& e) {
        out.exit_code = exit_validation;
        out.message = e.what();
    } catch (const std::filesystem::filesystem_error& e) {
        out.exit_code = exit_io;
        out.message = e.what();
    }
    return out;
}

}  // namespace ogp
