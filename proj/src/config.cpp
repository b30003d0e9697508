#include "ogp/config.hpp"

#include "ogp/format.hpp"
#include "ogp/presets.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace ogp {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw ConfigError("config: field '" + where + "': " + what);
}

void expect_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) schema_error(where.empty() ? key : where + "." + key, "unknown field");
}

template <typename T>
T get_field(const json& obj, const std::string& where, const std::string& key) {
    if (!obj.contains(key)) schema_error(where.empty() ? key : where + "." + key, "missing");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        schema_error(where.empty() ? key : where + "." + key, e.what());
    }
}

template <typename T>
T get_or(const json& obj, const std::string& where, const std::string& key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        schema_error(where.empty() ? key : where + "." + key, e.what());
    }
}

// matrices in configs are row-major lists of [re, im] pairs
Matrix parse_matrix(const json& rows, const std::string& where) {
    if (!rows.is_array() || rows.empty()) schema_error(where, "expected a non-empty array of rows");
    const int dim = static_cast<int>(rows.size());
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const json& row = rows.at(r);
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            schema_error(where, "row " + std::to_string(r) + " does not have " + std::to_string(dim) +
                                    " entries");
        for (int c = 0; c < dim; ++c) {
            const json& cell = row.at(c);
            if (!cell.is_array() || cell.size() != 2 || !cell.at(0).is_number() || !cell.at(1).is_number())
                schema_error(where, "entry (" + std::to_string(r) + "," + std::to_string(c) +
                                        ") must be a [re, im] pair");
            m(r, c) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
        }
    }
    return m;
}

json emit_matrix(const Matrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<int> parse_one_based_indices(const json& arr, const std::string& where, int dim) {
    if (!arr.is_array() || arr.empty()) schema_error(where, "expected a non-empty array of indices");
    std::vector<int> out;
    for (const auto& v : arr) {
        if (!v.is_number_integer()) schema_error(where, "indices must be integers");
        const int one_based = v.get<int>();
        if (one_based < 1 || one_based > dim)
            schema_error(where, "index " + std::to_string(one_based) + " outside 1.." + std::to_string(dim));
        out.push_back(one_based - 1);
    }
    return out;
}

StateSpec parse_state(const json& obj, int dim) {
    expect_keys(obj, "state", {"pseudopure", "levels"});
    StateSpec spec;
    if (obj.contains("pseudopure") == obj.contains("levels"))
        schema_error("state", "exactly one of 'pseudopure' or 'levels' is required");
    if (obj.contains("pseudopure")) {
        const json& pp = obj.at("pseudopure");
        expect_keys(pp, "state.pseudopure", {"epsilon", "n"});
        PseudopureStateSpec s;
        s.epsilon = get_field<double>(pp, "state.pseudopure", "epsilon");
        const int n = get_field<int>(pp, "state.pseudopure", "n");
        if (n < 1 || n > dim) schema_error("state.pseudopure.n", "outside 1..dimension");
        s.n = n - 1;
        if (s.epsilon < 0.0 || s.epsilon > 1.0)
            throw PhysicsError("state.pseudopure.epsilon must lie in [0, 1]");
        spec.pseudopure = s;
        return spec;
    }
    const json& levels = obj.at("levels");
    if (!levels.is_array() || levels.empty()) schema_error("state.levels", "expected a non-empty array");
    std::set<int> seen;
    double trace = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const std::string where = "state.levels[" + std::to_string(i) + "]";
        const json& lv = levels.at(i);
        expect_keys(lv, where, {"eigenvalue", "indices"});
        DiagonalLevelSpec d;
        d.eigenvalue = get_field<double>(lv, where, "eigenvalue");
        d.indices = parse_one_based_indices(lv.at("indices"), where + ".indices", dim);
        for (int idx : d.indices)
            if (!seen.insert(idx).second)
                schema_error(where + ".indices", "basis index " + std::to_string(idx + 1) +
                                                     " appears in more than one level");
        if (d.eigenvalue < -1e-12) throw PhysicsError(where + ".eigenvalue is negative");
        trace += d.eigenvalue * static_cast<double>(d.indices.size());
        spec.levels.push_back(std::move(d));
    }
    if (std::abs(trace - 1.0) > 1e-10)
        throw PhysicsError("state.levels: eigenvalues do not sum to unit trace (got " +
                           format_sig17(trace) + ")");
    return spec;
}

PathSpec parse_path(const json& obj, int dim) {
    expect_keys(obj, "path", {"schedule", "preset", "duration"});
    PathSpec spec;
    spec.duration = get_or<double>(obj, "path", "duration", 1.0);
    if (!(spec.duration > 0.0)) throw PhysicsError("path.duration must be > 0");
    if (obj.contains("schedule") == obj.contains("preset"))
        schema_error("path", "exactly one of 'schedule' or 'preset' is required");

    if (obj.contains("preset")) {
        const json& pr = obj.at("preset");
        expect_keys(pr, "path.preset",
                    {"name", "n", "m", "axis", "angle", "polar_angle", "turns", "eta", "omega"});
        PresetSpec ps;
        ps.name = get_field<std::string>(pr, "path.preset", "name");
        if (ps.name == "precession") {
            ps.polar_angle = get_field<double>(pr, "path.preset", "polar_angle");
            ps.turns = get_or<double>(pr, "path.preset", "turns", 1.0);
        } else if (ps.name == "block-rotation" || ps.name == "block-visibility") {
            const int n = get_field<int>(pr, "path.preset", "n");
            const int m = get_field<int>(pr, "path.preset", "m");
            if (n < 1 || n > dim || m < 1 || m > dim || n == m)
                schema_error("path.preset", "n, m must be distinct indices in 1..dimension");
            ps.n = n - 1;
            ps.m = m - 1;
            if (ps.name == "block-rotation") {
                const auto axis = get_field<std::vector<double>>(pr, "path.preset", "axis");
                if (axis.size() != 3) schema_error("path.preset.axis", "expected three components");
                std::copy(axis.begin(), axis.end(), ps.axis.begin());
                ps.angle = get_field<double>(pr, "path.preset", "angle");
            } else {
                ps.eta = get_field<double>(pr, "path.preset", "eta");
                ps.omega = get_field<double>(pr, "path.preset", "omega");
                if (ps.eta < 0.0 || ps.eta > 1.0) throw PhysicsError("path.preset.eta must lie in [0, 1]");
            }
        } else {
            schema_error("path.preset.name", "unknown preset '" + ps.name + "'");
        }
        spec.preset = std::move(ps);
        return spec;
    }

    const json& sched = obj.at("schedule");
    if (!sched.is_array() || sched.empty()) schema_error("path.schedule", "expected a non-empty array");
    std::vector<GeneratorInterval> intervals;
    for (std::size_t i = 0; i < sched.size(); ++i) {
        const std::string where = "path.schedule[" + std::to_string(i) + "]";
        const json& iv = sched.at(i);
        expect_keys(iv, where, {"t_begin", "t_end", "hamiltonian"});
        GeneratorInterval gi;
        gi.t_begin = get_field<double>(iv, where, "t_begin");
        gi.t_end = get_field<double>(iv, where, "t_end");
        gi.hamiltonian = parse_matrix(iv.at("hamiltonian"), where + ".hamiltonian");
        if (gi.hamiltonian.rows() != dim)
            schema_error(where + ".hamiltonian", "dimension does not match 'dimension'");
        if (!is_hermitian(gi.hamiltonian))
            throw PhysicsError(where + ".hamiltonian is not Hermitian");
        intervals.push_back(std::move(gi));
    }
    // tiling check with the offending interval named
    std::sort(intervals.begin(), intervals.end(),
              [](const GeneratorInterval& a, const GeneratorInterval& b) { return a.t_begin < b.t_begin; });
    double t = 0.0;
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        if (!(intervals[i].t_end > intervals[i].t_begin))
            schema_error("path.schedule[" + std::to_string(i) + "]", "interval has nonpositive length");
        if (intervals[i].t_begin < t - 1e-12)
            schema_error("path.schedule[" + std::to_string(i) + "]",
                         "interval overlaps its predecessor (starts at " + format_sig17(intervals[i].t_begin) +
                             " before " + format_sig17(t) + ")");
        if (intervals[i].t_begin > t + 1e-12)
            schema_error("path.schedule[" + std::to_string(i) + "]",
                         "gap before interval (previous ends at " + format_sig17(t) + ")");
        t = intervals[i].t_end;
    }
    spec.schedule = std::move(intervals);
    spec.duration = t;
    return spec;
}

BasisSpec parse_basis(const json& v, int dim) {
    BasisSpec spec;
    if (v.is_string()) {
        if (v.get<std::string>() != "computational")
            schema_error("basis", "unknown named basis '" + v.get<std::string>() + "'");
        return spec;
    }
    if (!v.is_object()) schema_error("basis", "expected 'computational' or an object");
    expect_keys(v, "basis", {"precession_polar", "columns"});
    if (v.contains("precession_polar") == v.contains("columns"))
        schema_error("basis", "exactly one of 'precession_polar' or 'columns' is required");
    if (v.contains("precession_polar")) {
        if (dim != 2) schema_error("basis.precession_polar", "requires dimension 2");
        spec.kind = BasisSpec::Kind::precession;
        spec.polar_angle = get_field<double>(v, "basis", "precession_polar");
        return spec;
    }
    spec.kind = BasisSpec::Kind::columns;
    spec.columns = parse_matrix(v.at("columns"), "basis.columns").transpose();  // stored per column
    if (spec.columns.rows() != dim) schema_error("basis.columns", "dimension does not match 'dimension'");
    if (unitarity_residual(spec.columns) > 1e-10) throw PhysicsError("basis.columns are not orthonormal");
    return spec;
}

ScanRange parse_range(const json& obj, const std::string& where) {
    expect_keys(obj, where, {"min", "max", "points"});
    ScanRange r;
    r.min = get_field<double>(obj, where, "min");
    r.max = get_field<double>(obj, where, "max");
    r.points = get_field<int>(obj, where, "points");
    if (r.points < 1) schema_error(where + ".points", "must be >= 1");
    if (r.points > 1 && !(r.max > r.min)) schema_error(where, "max must exceed min");
    return r;
}

}  // namespace

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::pure: return "pure";
        case RunMode::mixed: return "mixed";
        case RunMode::degenerate: return "degenerate";
        case RunMode::pseudopure_closed: return "pseudopure-closed";
        case RunMode::nodal_scan: return "nodal-scan";
        case RunMode::figure1: return "figure1";
        case RunMode::interfere: return "interfere";
        case RunMode::selftest: return "selftest";
    }
    throw std::logic_error("to_string: bad mode");
}

RunMode mode_from_string(const std::string& name) {
    for (RunMode m : {RunMode::pure, RunMode::mixed, RunMode::degenerate, RunMode::pseudopure_closed,
                      RunMode::nodal_scan, RunMode::figure1, RunMode::interfere, RunMode::selftest})
        if (to_string(m) == name) return m;
    throw ConfigError("config: field 'mode': unknown mode '" + name + "'");
}

ExperimentConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        // count lines up to the reported byte so the error is navigable
        std::size_t line = 1;
        const std::size_t stop = std::min(json_text.size(), e.byte);
        for (std::size_t i = 0; i < stop; ++i)
            if (json_text[i] == '\n') ++line;
        throw ConfigError("config: malformed JSON at line " + std::to_string(line) + ": " + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config: top level must be an object");
    expect_keys(doc, "",
                {"mode", "dimension", "max_dimension", "grid_steps", "nodal_tol", "require_defined",
                 "seed", "indices", "state", "path", "basis", "params", "scan", "figure1", "interfere"});

    ExperimentConfig cfg;
    cfg.mode = mode_from_string(get_field<std::string>(doc, "", "mode"));
    cfg.max_dimension = get_or<int>(doc, "", "max_dimension", kDefaultMaxDimension);
    if (cfg.max_dimension < 2) schema_error("max_dimension", "must be >= 2");
    cfg.dimension = get_or<int>(doc, "", "dimension", 2);
    if (cfg.dimension < 1) schema_error("dimension", "must be >= 1");
    if (cfg.dimension > cfg.max_dimension)
        throw PhysicsError("dimension " + std::to_string(cfg.dimension) + " exceeds max_dimension " +
                           std::to_string(cfg.max_dimension));
    cfg.grid_steps = get_or<int>(doc, "", "grid_steps", kDefaultGridSteps);
    if (cfg.grid_steps < 1) schema_error("grid_steps", "must be >= 1");
    cfg.nodal_tol = get_or<double>(doc, "", "nodal_tol", kDefaultNodalTol);
    if (!(cfg.nodal_tol > 0.0)) schema_error("nodal_tol", "must be > 0");
    cfg.require_defined = get_or<bool>(doc, "", "require_defined", false);
    if (doc.contains("seed")) cfg.seed = get_field<std::uint64_t>(doc, "", "seed");

    const bool needs_indices =
        cfg.mode == RunMode::pure || cfg.mode == RunMode::mixed || cfg.mode == RunMode::degenerate;
    if (doc.contains("indices"))
        cfg.indices = parse_one_based_indices(doc.at("indices"), "indices", cfg.dimension);
    else if (needs_indices)
        schema_error("indices", "missing (required by mode '" + to_string(cfg.mode) + "')");

    const bool needs_state = cfg.mode == RunMode::mixed || cfg.mode == RunMode::degenerate ||
                             cfg.mode == RunMode::interfere;
    if (doc.contains("state")) cfg.state = parse_state(doc.at("state"), cfg.dimension);
    else if (needs_state) schema_error("state", "missing (required by mode '" + to_string(cfg.mode) + "')");

    const bool needs_path = needs_indices || cfg.mode == RunMode::interfere;
    if (doc.contains("path")) cfg.path = parse_path(doc.at("path"), cfg.dimension);
    else if (needs_path) schema_error("path", "missing (required by mode '" + to_string(cfg.mode) + "')");

    if (doc.contains("basis")) cfg.basis = parse_basis(doc.at("basis"), cfg.dimension);

    if (cfg.mode == RunMode::pseudopure_closed) {
        if (!doc.contains("params")) schema_error("params", "missing (required by pseudopure-closed)");
        const json& p = doc.at("params");
        expect_keys(p, "params", {"epsilon", "eta", "omega"});
        PseudopureParams pp;
        pp.n_dim = cfg.dimension;
        pp.epsilon = get_field<double>(p, "params", "epsilon");
        pp.eta = get_field<double>(p, "params", "eta");
        pp.solid_angle = get_field<double>(p, "params", "omega");
        try {
            pp.validate();
        } catch (const std::invalid_argument& e) {
            throw PhysicsError(std::string("params: ") + e.what());
        }
        cfg.params = pp;
    }

    if (cfg.mode == RunMode::nodal_scan) {
        if (!doc.contains("scan")) schema_error("scan", "missing (required by nodal-scan)");
        const json& s = doc.at("scan");
        expect_keys(s, "scan", {"epsilon", "eta", "omega"});
        if (s.contains("epsilon")) cfg.scan.epsilon = parse_range(s.at("epsilon"), "scan.epsilon");
        if (s.contains("eta")) cfg.scan.eta = parse_range(s.at("eta"), "scan.eta");
        cfg.scan.omega = get_or<double>(s, "scan", "omega", cfg.scan.omega);
        if (cfg.scan.epsilon.min <= 0.0 || cfg.scan.epsilon.max > 1.0)
            throw PhysicsError("scan.epsilon must stay within (0, 1]");
        if (cfg.scan.eta.min < 0.0 || cfg.scan.eta.max > 1.0)
            throw PhysicsError("scan.eta must stay within [0, 1]");
    }

    if (doc.contains("figure1")) {
        const json& f = doc.at("figure1");
        expect_keys(f, "figure1", {"dims", "eta_points"});
        cfg.figure1.dims = get_or<std::vector<int>>(f, "figure1", "dims", cfg.figure1.dims);
        cfg.figure1.eta_points = get_or<int>(f, "figure1", "eta_points", cfg.figure1.eta_points);
        for (int n : cfg.figure1.dims)
            if (n < 3) throw PhysicsError("figure1.dims: f(η, N) needs N >= 3");
        if (cfg.figure1.eta_points < 2) schema_error("figure1.eta_points", "must be >= 2");
    }

    if (cfg.mode == RunMode::interfere) {
        if (!doc.contains("interfere")) schema_error("interfere", "missing (required by mode)");
        const json& it = doc.at("interfere");
        expect_keys(it, "interfere", {"m", "chi_points"});
        const int m = get_field<int>(it, "interfere", "m");
        if (m < 1 || m > cfg.dimension) schema_error("interfere.m", "outside 1..dimension");
        cfg.interfere.m = m - 1;
        cfg.interfere.chi_points = get_or<int>(it, "interfere", "chi_points", 64);
        if (cfg.interfere.chi_points < 8) schema_error("interfere.chi_points", "must be >= 8");
        if (!cfg.state || !cfg.state->pseudopure)
            schema_error("state", "interfere mode requires a pseudopure state");
    }

    if (cfg.mode == RunMode::selftest && !cfg.seed)
        schema_error("seed", "selftest uses randomness; configs that use randomness must pin a seed");

    return cfg;
}

std::string emit_config(const ExperimentConfig& cfg) {
    json doc;
    doc["mode"] = to_string(cfg.mode);
    doc["dimension"] = cfg.dimension;
    doc["max_dimension"] = cfg.max_dimension;
    doc["grid_steps"] = cfg.grid_steps;
    doc["nodal_tol"] = cfg.nodal_tol;
    doc["require_defined"] = cfg.require_defined;
    if (cfg.seed) doc["seed"] = *cfg.seed;
    if (!cfg.indices.empty()) {
        json arr = json::array();
        for (int i : cfg.indices) arr.push_back(i + 1);
        doc["indices"] = arr;
    }
    if (cfg.state) {
        json st;
        if (cfg.state->pseudopure) {
            st["pseudopure"] = {{"epsilon", cfg.state->pseudopure->epsilon},
                                {"n", cfg.state->pseudopure->n + 1}};
        } else {
            json levels = json::array();
            for (const auto& lv : cfg.state->levels) {
                json idx = json::array();
                for (int i : lv.indices) idx.push_back(i + 1);
                levels.push_back({{"eigenvalue", lv.eigenvalue}, {"indices", idx}});
            }
            st["levels"] = levels;
        }
        doc["state"] = st;
    }
    if (cfg.path) {
        json pt;
        if (cfg.path->preset) {
            const auto& ps = *cfg.path->preset;
            json pr;
            pr["name"] = ps.name;
            if (ps.name == "precession") {
                pr["polar_angle"] = ps.polar_angle;
                pr["turns"] = ps.turns;
            } else {
                pr["n"] = ps.n + 1;
                pr["m"] = ps.m + 1;
                if (ps.name == "block-rotation") {
                    pr["axis"] = {ps.axis[0], ps.axis[1], ps.axis[2]};
                    pr["angle"] = ps.angle;
                } else {
                    pr["eta"] = ps.eta;
                    pr["omega"] = ps.omega;
                }
            }
            pt["preset"] = pr;
            pt["duration"] = cfg.path->duration;
        } else {
            json sched = json::array();
            for (const auto& iv : cfg.path->schedule)
                sched.push_back({{"t_begin", iv.t_begin},
                                 {"t_end", iv.t_end},
                                 {"hamiltonian", emit_matrix(iv.hamiltonian)}});
            pt["schedule"] = sched;
        }
        doc["path"] = pt;
    }
    if (cfg.basis.kind == BasisSpec::Kind::precession)
        doc["basis"] = {{"precession_polar", cfg.basis.polar_angle}};
    else if (cfg.basis.kind == BasisSpec::Kind::columns)
        doc["basis"] = {{"columns", emit_matrix(cfg.basis.columns.transpose())}};

    if (cfg.params)
        doc["params"] = {{"epsilon", cfg.params->epsilon},
                         {"eta", cfg.params->eta},
                         {"omega", cfg.params->solid_angle}};
    if (cfg.mode == RunMode::nodal_scan)
        doc["scan"] = {{"epsilon",
                        {{"min", cfg.scan.epsilon.min}, {"max", cfg.scan.epsilon.max},
                         {"points", cfg.scan.epsilon.points}}},
                       {"eta",
                        {{"min", cfg.scan.eta.min}, {"max", cfg.scan.eta.max},
                         {"points", cfg.scan.eta.points}}},
                       {"omega", cfg.scan.omega}};
    if (cfg.mode == RunMode::figure1)
        doc["figure1"] = {{"dims", cfg.figure1.dims}, {"eta_points", cfg.figure1.eta_points}};
    if (cfg.mode == RunMode::interfere)
        doc["interfere"] = {{"m", cfg.interfere.m + 1}, {"chi_points", cfg.interfere.chi_points}};
    return doc.dump(2) + "\n";
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    const std::string canon = emit_config(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canon) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

SpectralDecomposition build_state(const ExperimentConfig& cfg) {
    if (!cfg.state) throw ConfigError("config: no state specified");
    // level indices refer to the transport basis, so the state is diagonal in
    // the basis the W family is built on
    const OrthonormalBasis basis = build_basis(cfg);
    SpectralDecomposition rho;
    if (cfg.state->pseudopure) {
        rho = pseudopure_density(cfg.dimension, cfg.state->pseudopure->epsilon, cfg.state->pseudopure->n);
    } else {
        const int dim = cfg.dimension;
        for (const auto& lv : cfg.state->levels) {
            Matrix p = Matrix::Zero(dim, dim);
            for (int i : lv.indices) p(i, i) = 1.0;
            rho.levels.push_back({lv.eigenvalue, static_cast<int>(lv.indices.size()), std::move(p)});
        }
        rho = rho.with_completed_kernel();
    }
    return rho.conjugated(basis.matrix());
}

UnitaryPath build_path(const ExperimentConfig& cfg) {
    if (!cfg.path) throw ConfigError("config: no path specified");
    if (!cfg.path->preset) return UnitaryPath::schedule(cfg.path->schedule);
    const auto& ps = *cfg.path->preset;
    if (ps.name == "precession") {
        if (cfg.dimension != 2) throw PhysicsError("precession preset requires dimension 2");
        return precession_path(ps.turns, cfg.path->duration);
    }
    if (ps.name == "block-rotation")
        return block_rotation_path(cfg.dimension, ps.n, ps.m, ps.axis, ps.angle, cfg.path->duration);
    return block_path_for(cfg.dimension, ps.n, ps.m, ps.eta, ps.omega, cfg.path->duration);
}

OrthonormalBasis build_basis(const ExperimentConfig& cfg) {
    switch (cfg.basis.kind) {
        case BasisSpec::Kind::computational: {
            // the precession preset implies its tilted eigenbasis
            if (cfg.path && cfg.path->preset && cfg.path->preset->name == "precession")
                return precession_basis(cfg.path->preset->polar_angle);
            return OrthonormalBasis::computational(cfg.dimension);
        }
        case BasisSpec::Kind::precession: return precession_basis(cfg.basis.polar_angle);
        case BasisSpec::Kind::columns: return OrthonormalBasis::from_columns(cfg.basis.columns);
    }
    throw std::logic_error("build_basis: bad kind");
}

}  // namespace ogp
