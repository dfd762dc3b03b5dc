/**
 * @file cli.hpp
 * @brief Subcommand front end: option resolution, dispatch and reporting.
 *
 * Every option is resolved as flag > config file > mode default, then echoed
 * into the output header so that `replay --from FILE` regenerates the same
 * bytes. Requires CLI11 and nlohmann/json on the include path.
 *
 * Exit codes: 0 success, 2 usage or domain error, 3 infeasible, 4 numerical failure.
 */
#pragma once

#include "invcrit/invcrit.hpp"
#include "invcrit/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace invcrit::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kInfeasible = 3, kNumerical = 4 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kSeedEnv = "INVCRIT_SEED";
inline constexpr std::uint64_t kDefaultSeed = 1;

/// Resolved option values of one run.
class Params {
public:
    Params(std::map<std::string, std::string> values, std::uint64_t seed) : values_(std::move(values)), seed_(seed) {}

    [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] const std::map<std::string, std::string>& values() const noexcept { return values_; }

    [[nodiscard]] std::string str(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw UsageError("missing required option --" + key);
        return it->second;
    }

    [[nodiscard]] double real(const std::string& key) const { return parse_real(key, str(key)); }

    [[nodiscard]] std::optional<double> maybe_real(const std::string& key) const {
        if (!has(key)) return std::nullopt;
        return real(key);
    }

    [[nodiscard]] long long integer(const std::string& key) const {
        const auto s = str(key);
        long long v = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
        if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
            throw UsageError("--" + key + " expects an integer, got '" + s + "'");
        return v;
    }

    [[nodiscard]] std::size_t count(const std::string& key) const {
        const auto v = integer(key);
        if (v < 0) throw UsageError("--" + key + " must be non-negative");
        return static_cast<std::size_t>(v);
    }

    [[nodiscard]] bool flag(const std::string& key) const { return has(key) && str(key) == "true"; }

    [[nodiscard]] std::vector<double> reals(const std::string& key) const {
        std::vector<double> out;
        for (const auto& item : split(str(key), ',')) out.push_back(parse_real(key, item));
        if (out.empty()) throw UsageError("--" + key + " needs at least one value");
        return out;
    }

    [[nodiscard]] std::vector<int> ints(const std::string& key) const {
        std::vector<int> out;
        for (double v : reals(key)) {
            if (v != std::floor(v) || std::abs(v) > 1e9) throw UsageError("--" + key + " expects integers");
            out.push_back(static_cast<int>(v));
        }
        return out;
    }

    static std::vector<std::string> split(const std::string& s, char sep) {
        std::vector<std::string> out;
        std::string cur;
        std::istringstream in(s);
        while (std::getline(in, cur, sep)) {
            const auto a = cur.find_first_not_of(" \t");
            const auto b = cur.find_last_not_of(" \t");
            if (a != std::string::npos) out.push_back(cur.substr(a, b - a + 1));
        }
        return out;
    }

private:
    static double parse_real(const std::string& key, const std::string& s) {
        char* end = nullptr;
        const double v = std::strtod(s.c_str(), &end);
        if (s.empty() || end != s.c_str() + s.size()) throw UsageError("--" + key + " expects a number, got '" + s + "'");
        return v;
    }

    std::map<std::string, std::string> values_;
    std::uint64_t seed_;
};

struct Outcome {
    report::Table table;
    int code = kOk;
};

struct OptionDef {
    std::string name;
    std::string help;
    bool flag = false;
};

using Defaults = std::map<std::string, std::string>;

struct Command {
    std::string path;  ///< e.g. "mac limits"
    std::string help;
    std::vector<OptionDef> options;
    std::vector<std::string> required;
    /// Defaults given the (possibly unset) mode value.
    std::function<Defaults(const std::string& mode)> defaults;
    std::function<Outcome(const Params&)> execute;
};

namespace detail {

using report::Cell;

inline double to_f(std::size_t v) { return static_cast<double>(v); }
inline long long to_ll(std::size_t v) { return static_cast<long long>(v); }

inline Cell opt_cell(const std::optional<double>& v) {
    if (!v) return std::string();
    return *v;
}

inline SerModel ser_model(const Params& p) {
    const auto kind = p.str("ser");
    if (kind == "exact") return SerModel::exact();
    if (kind == "union") return SerModel::union_bound();
    if (kind == "table") {
        if (!p.has("ser-table")) throw UsageError("--ser table requires --ser-table h:p,h:p,...");
        std::vector<std::pair<double, double>> knots;
        for (const auto& item : Params::split(p.str("ser-table"), ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos) throw UsageError("SER table knots are written h:p");
            knots.emplace_back(std::strtod(item.substr(0, colon).c_str(), nullptr),
                               std::strtod(item.substr(colon + 1).c_str(), nullptr));
        }
        return SerModel::table(SerTable(std::move(knots)));
    }
    throw UsageError("--ser must be exact, union or table");
}

// ---------------------------------------------------------------- criteria

inline Outcome criteria(const Params& p) {
    const auto ser = ser_model(p);
    Outcome out;
    auto& t = out.table;
    if (p.flag("sweep")) {
        const auto ms = p.has("m-list") ? p.ints("m-list") : std::vector<int>{static_cast<int>(p.integer("m"))};
        const auto gs = p.has("g-list") ? p.reals("g-list") : std::vector<double>{p.real("g")};
        std::vector<CurveFamily> fams;
        for (int m : ms)
            for (double g : gs) fams.push_back({m, g});
        const LogAxis axis{p.real("Bs-lo"), p.real("Bs-hi"), p.count("Bs-n")};
        t.columns = {"m", "g", "Bs", "h", "ser", "capacity", "c_F", "w"};
        for (const auto& r : sweep_curves(fams, axis, ser))
            t.add_row({static_cast<long long>(r.m), r.g, r.signal_base, r.h, r.ser, r.capacity, r.icse, r.icpe});
        t.add_summary("families", to_ll(fams.size()));
        t.add_summary("rows", to_ll(t.rows.size()));
        return out;
    }
    const ChannelPoint pt(static_cast<int>(p.integer("m")), p.real("g"), p.real("Bs"));
    const double pe = invcrit::ser(pt, ser);
    const double cap = capacity_bits_per_symbol(pt.m(), pe);
    const double cf = icse(pt, ser);
    const double w = icpe(pt, ser);
    t.columns = {"m", "g", "Bs", "h", "ser", "capacity", "c_F", "w", "w_dB"};
    std::vector<Cell> row{static_cast<long long>(pt.m()), pt.g(), pt.signal_base(), pt.esinr(), pe, cap, cf, w,
                          icpe_db(w)};
    if (p.has("N0")) {
        const auto j = icpe_joule_forms(w, {p.real("N0"), p.real("N0i")}, pt.signal_base());
        t.columns.insert(t.columns.end(), {"w_Jc", "w_Jb"});
        row.insert(row.end(), {j.per_bit_hz, j.per_bit});
    }
    if (p.has("Pt") && p.has("Pin")) {
        LinkBudget b;
        b.transmit_power_w = p.real("Pt");
        b.system_gain = p.real("Gsys");
        b.path_loss_exponent = p.real("a");
        b.reference_distance_m = p.real("d0");
        b.reference_loss = p.real("L0");
        b.noise_interference_power_w = p.real("Pin");
        const double r = cell_radius(b, pt.g());
        t.columns.insert(t.columns.end(), {"R_c_m", "ICCE"});
        row.insert(row.end(), {r, icce(w, r)});
    }
    t.add_row(std::move(row));
    return out;
}

// ---------------------------------------------------------------- optimize

inline Variable variable(const Params& p, const std::string& name) {
    if (p.has(name)) return Variable::at(p.real(name));
    return Variable::over(p.real(name + "-lo"), p.real(name + "-hi"), p.count(name + "-n"));
}

inline LogAxis axis(const Params& p, const std::string& name) {
    return {p.real(name + "-lo"), p.real(name + "-hi"), p.count(name + "-n")};
}

inline void result_row(report::Table& t, const ExtremumResult& r) {
    t.columns = {"m",        "g",         "Bs",        "h",          "objective",          "c_F",
                 "w",        "attained",  "feasible",  "constraint_active", "icse_slack", "icpe_cap",
                 "icpe_slack", "violation", "grid_evaluations", "refine_evaluations"};
    t.add_row({static_cast<long long>(r.m), r.g, r.signal_base, r.h, r.objective, r.icse, r.icpe, r.attained,
               r.feasible, r.constraint_active, opt_cell(r.icse_slack), opt_cell(r.icpe_cap), opt_cell(r.icpe_slack),
               r.violation, to_ll(r.grid_evaluations), to_ll(r.refine_evaluations)});
}

inline Outcome optimize(const Params& p) {
    const auto mode = p.str("mode");
    const auto ser = ser_model(p);
    Outcome out;
    auto& t = out.table;
    const double rel_tol = p.real("rel-tol");
    if (mode == "statement1") {
        const double thr = p.real("threshold");
        t.columns = {"m", "Bs", "best_g", "min_w", "spread", "pass"};
        bool all = true;
        for (int m : p.ints("m-list")) {
            const auto rep = verify_statement1(m, axis(p, "g"), axis(p, "Bs"), ser, rel_tol, thr);
            for (std::size_t i = 0; i < rep.signal_base.size(); ++i)
                t.add_row({static_cast<long long>(m), rep.signal_base[i], rep.best_g[i], rep.min_icpe[i], rep.spread,
                           rep.pass});
            all = all && rep.pass;
        }
        t.add_summary("pass", all);
        return out;
    }
    if (mode == "statement3") {
        const double thr = p.real("threshold");
        const auto gs = p.reals("g-list");
        t.columns = {"m", "g", "Bs_opt", "Bs_g2", "c_F", "attained", "strictly_decreasing", "product_spread", "pass"};
        bool all = true;
        for (int m : p.ints("m-list")) {
            const auto rep = verify_statement3(m, gs, axis(p, "h"), ser, rel_tol, thr);
            for (const auto& row : rep.rows)
                t.add_row({static_cast<long long>(m), row.g, row.optimal_signal_base, row.product, row.icse,
                           row.attained, rep.strictly_decreasing, rep.product_spread, rep.pass});
            all = all && rep.pass;
        }
        t.add_summary("pass", all);
        return out;
    }
    ExtremumSpec spec;
    if (mode == "min-icpe") {
        spec.objective = Objective::MinIcpe;
    } else if (mode == "max-icse") {
        spec.objective = Objective::MaxIcse;
    } else {
        throw UsageError("--mode must be min-icpe, max-icse, statement1 or statement3");
    }
    spec.alphabet = p.ints("m-list");
    spec.g = variable(p, "g");
    spec.signal_base = variable(p, "Bs");
    spec.min_icse = p.maybe_real("min-icse");
    spec.max_icpe = p.maybe_real("max-icpe");
    spec.icpe_band = p.maybe_real("band");
    spec.ser = ser;
    spec.rel_tol = rel_tol;
    spec.constraint_tol = p.real("constraint-tol");
    spec.use_h_reduction = !p.flag("no-reduction");
    try {
        const auto r = solve(spec);
        result_row(t, r);
        t.add_summary("status", std::string(r.attained ? "optimum" : "infimum"));
    } catch (const Infeasible& e) {
        result_row(t, e.certificate());
        t.add_summary("status", std::string("infeasible"));
        out.code = kInfeasible;
    }
    return out;
}

// ---------------------------------------------------------------- interference

inline CellLayout layout_for(const Params& p, std::size_t cells) {
    CellLayout layout;
    for (std::size_t c = 0; c < cells; ++c) layout.interferers.push_back({p.real("path-loss"), p.real("weight")});
    return layout;
}

inline EnsembleKind ensemble_kind(const Params& p) {
    const auto k = p.str("kind");
    if (k == "walsh") return EnsembleKind::Walsh;
    if (k == "shift") return EnsembleKind::CyclicShift;
    throw UsageError("--kind must be walsh or shift");
}

inline Outcome interference(const Params& p) {
    const auto mode = p.str("mode");
    const std::size_t trials = p.count("trials");
    const std::size_t cells = p.count("cells");
    const auto kind = ensemble_kind(p);
    const std::size_t active = p.count("active");
    Outcome out;
    auto& t = out.table;
    if (mode == "surface") {
        const std::size_t n_grid = p.count("grid");
        const auto tg = numeric::linear_grid(0.0, p.real("timing-max"), n_grid);
        const auto pg = numeric::linear_grid(0.0, p.real("phase-max"), n_grid);
        const auto ens = build_cell_ensembles(static_cast<int>(p.integer("n")), active, cells, kind);
        const auto layout = layout_for(p, cells);
        t.columns = {"timing_std", "phase_std", "P_s", "P_intra", "P_inter", "sinr_db"};
        for (const auto& s : sinr_surface(tg, pg, p.real("noise-db"), ens.own, layout, ens.interferers, trials, p.seed()))
            t.add_row({s.timing_std, s.phase_std, s.signal, s.intra, s.inter, s.sinr_db});
        t.add_summary("corner_sinr_db", std::get<double>(t.rows.front().back()));
        return out;
    }
    if (mode == "intra") {
        const auto ens = build_cell_ensembles(static_cast<int>(p.integer("n")), active, 0, kind);
        const double et = p.real("timing"), ep = p.real("phase");
        t.columns = {"scale", "timing_std", "phase_std", "P_intra", "std_error", "trials"};
        for (double k : p.reals("ladder")) {
            const auto e = intra_cell_interference(ens.own, {k * et, k * ep}, trials, p.seed());
            t.add_row({k, k * et, k * ep, e.value, e.std_error, to_ll(e.trials)});
        }
        return out;
    }
    if (mode == "inter") {
        const int n = static_cast<int>(p.integer("n"));
        const auto ens = build_cell_ensembles(n, active, cells, kind);
        const auto layout = layout_for(p, cells);
        const auto e = inter_cell_interference(layout, ens.own, ens.interferers, {p.real("timing"), p.real("phase")},
                                               trials, p.seed());
        t.columns = {"n", "cells", "P_inter", "std_error", "mean_path_loss_index", "trials"};
        t.add_row({static_cast<long long>(n), to_ll(cells), e.value, e.std_error, layout.mean_path_loss_index(), to_ll(trials)});
        return out;
    }
    if (mode == "n-sweep") {
        t.columns = {"n", "period", "P_inter", "std_error", "trials"};
        bool non_increasing = true;
        double prev = std::numeric_limits<double>::infinity();
        for (int n : p.ints("n-list")) {
            const auto ens = build_cell_ensembles(n, active, cells, kind);
            const auto layout = layout_for(p, cells);
            const auto e = inter_cell_interference(layout, ens.own, ens.interferers,
                                                   {p.real("timing"), p.real("phase")}, trials, p.seed());
            t.add_row({static_cast<long long>(n), to_ll(ens.own.length()), e.value, e.std_error, to_ll(trials)});
            if (e.value > prev) non_increasing = false;
            prev = e.value;
        }
        t.add_summary("non_increasing", non_increasing);
        return out;
    }
    throw UsageError("--mode must be surface, intra, inter or n-sweep");
}

// ---------------------------------------------------------------- mac

inline Discipline discipline(const Params& p) {
    const auto d = p.str("discipline");
    if (d == "md1") return Discipline::MD1;
    if (d == "mm1") return Discipline::MM1;
    throw UsageError("--discipline must be md1 or mm1");
}

inline MacModel mac_model(const Params& p) { return MacModel::from_length(discipline(p), p.real("L"), p.maybe_real("p")); }

inline Outcome mac_limits(const Params& p) {
    const auto model = mac_model(p);
    const auto lim = limits(model);
    Outcome out;
    out.table.columns = {"discipline", "L", "p", "H", "v_inf", "C_sup"};
    const bool geo = model.discipline == Discipline::MM1;
    out.table.add_row({std::string(to_string(model.discipline)), model.mean_length_bits(),
                       geo ? Cell{model.p()} : Cell{std::string()}, opt_cell(lim.entropy_bits), lim.overhead_infimum,
                       lim.capacity_supremum});
    return out;
}

inline Outcome mac_simulate(const Params& p) {
    const auto model = mac_model(p);
    SimConfig cfg;
    cfg.offered_load = p.reals("loads");
    cfg.overhead = p.maybe_real("v");
    cfg.warmup_packets = p.count("warmup");
    cfg.measured_packets = p.count("packets");
    cfg.batches = p.count("batches");
    cfg.confidence = p.real("confidence");
    cfg.target_half_width = p.real("target-hw");
    cfg.corruption_probability = p.real("corruption");
    cfg.seed = p.seed();
    const auto r = simulate_tdma(model, cfg);
    Outcome out;
    auto& t = out.table;
    t.columns = {"G", "S", "ci_low", "ci_high", "unstable", "useful_time", "overhead_time", "idle_time", "horizon",
                 "packets"};
    for (const auto& pt : r.points)
        t.add_row({pt.offered_load, pt.throughput, pt.ci_low, pt.ci_high, pt.unstable, pt.useful_time,
                   pt.overhead_time, pt.idle_time, pt.horizon, to_ll(pt.packets)});
    t.add_summary("v", r.overhead);
    t.add_summary("empirical_capacity", r.empirical_capacity);
    t.add_summary("saturation_capacity", r.saturation_capacity);
    t.add_summary("C_sup", r.analytic.capacity_supremum);
    t.add_summary("relative_gap", r.relative_gap);
    t.add_summary("any_unstable", r.any_unstable());
    if (cfg.corruption_probability > 0.0) t.add_summary("mode", std::string("exploratory-corruption"));
    return out;
}

inline Outcome mac_allocate(const Params& p) {
    std::vector<TokenRequest> req;
    const auto shares = p.reals("req");
    for (std::size_t i = 0; i < shares.size(); ++i) req.push_back({static_cast<int>(i), shares[i]});
    std::optional<std::uint64_t> poly;
    if (p.has("poly")) poly = std::stoull(p.str("poly"), nullptr, 0);
    const auto a = allocate_identifiers(req, static_cast<int>(p.integer("n")), poly);
    const auto check = verify_allocation(a);
    Outcome out;
    auto& t = out.table;
    t.columns = {"station", "request", "exact_share", "count", "first_index", "code", "identifiers"};
    std::size_t total = 0;
    for (const auto& s : a.stations) {
        std::string ids;
        for (std::size_t k = 0; k < s.identifiers.size(); ++k) ids += (k ? ";" : "") + std::to_string(s.identifiers[k]);
        t.add_row({static_cast<long long>(s.station), s.request, s.exact_share, to_ll(s.count), to_ll(s.first_index),
                   s.code, ids});
        total += s.count;
    }
    t.add_summary("polynomial", static_cast<long long>(a.polynomial));
    t.add_summary("space", to_ll(a.space));
    t.add_summary("assigned", to_ll(total));
    t.add_summary("unassigned", to_ll(a.unassigned));
    t.add_summary("verified", check.ok());
    return out;
}

// ---------------------------------------------------------------- registry

inline std::vector<OptionDef> ser_options() {
    return {{"ser", "SER rule: exact | union | table"}, {"ser-table", "table knots h:p,h:p,..."}};
}

inline std::vector<Command> commands() {
    std::vector<Command> cmds;

    Command crit;
    crit.path = "criteria";
    crit.help = "ICSE/ICPE and derived criteria for a point or a B_s sweep";
    crit.options = {{"m", "alphabet size"},
                    {"g", "SINR amplitude"},
                    {"Bs", "signal base"},
                    {"sweep", "emit curve families over B_s", true},
                    {"m-list", "sweep alphabets (default: --m)"},
                    {"g-list", "sweep g values (default: --g)"},
                    {"Bs-lo", "sweep B_s lower bound"},
                    {"Bs-hi", "sweep B_s upper bound"},
                    {"Bs-n", "sweep points (log spaced)"},
                    {"N0", "noise density N0n, W/Hz (adds Joule forms)"},
                    {"N0i", "interference density N0i, W/Hz"},
                    {"Pt", "transmit power, W (with --Pin adds R_c and ICCE)"},
                    {"Gsys", "system gain"},
                    {"a", "path-loss exponent"},
                    {"d0", "reference distance, m"},
                    {"L0", "loss at d0"},
                    {"Pin", "interference plus noise power, W"}};
    for (auto& o : ser_options()) crit.options.push_back(o);
    crit.required = {"m"};
    crit.defaults = [](const std::string&) {
        return Defaults{{"g", "1"},     {"Bs", "2"},    {"ser", "exact"}, {"Bs-lo", "0.1"}, {"Bs-hi", "1000"},
                        {"Bs-n", "200"}, {"N0i", "0"},  {"Gsys", "1"},    {"a", "2"},       {"d0", "1"},
                        {"L0", "1"}};
    };
    crit.execute = criteria;
    cmds.push_back(crit);

    Command opt;
    opt.path = "optimize";
    opt.help = "constrained extremum search and statement checks";
    opt.options = {{"mode", "min-icpe | max-icse | statement1 | statement3"},
                   {"m-list", "alphabet sizes"},
                   {"g", "fixed g"},
                   {"g-lo", "g lower bound"},
                   {"g-hi", "g upper bound"},
                   {"g-n", "g grid points"},
                   {"Bs", "fixed signal base"},
                   {"Bs-lo", "B_s lower bound"},
                   {"Bs-hi", "B_s upper bound"},
                   {"Bs-n", "B_s grid points"},
                   {"g-list", "statement3 g values"},
                   {"h-lo", "statement3 h lower bound"},
                   {"h-hi", "statement3 h upper bound"},
                   {"h-n", "statement3 grid points"},
                   {"min-icse", "constraint c_F >= value"},
                   {"max-icpe", "constraint w <= value"},
                   {"band", "relative ICPE band above the infimum"},
                   {"rel-tol", "refinement tolerance"},
                   {"constraint-tol", "relative constraint tolerance"},
                   {"threshold", "statement pass threshold"},
                   {"no-reduction", "disable the 1-D h search", true}};
    for (auto& o : ser_options()) opt.options.push_back(o);
    opt.defaults = [](const std::string& mode) {
        Defaults d{{"mode", "min-icpe"}, {"ser", "exact"}, {"rel-tol", "1e-6"}};
        if (mode == "statement1") {
            d.insert({{"m-list", "2,4,8,16"}, {"g-lo", "1e-5"}, {"g-hi", "100"}, {"g-n", "141"},
                      {"Bs-lo", "0.1"}, {"Bs-hi", "100"}, {"Bs-n", "13"}, {"threshold", "1e-6"}});
        } else if (mode == "statement3") {
            d.insert({{"m-list", "2,8,32"}, {"g-list", "0.5,1,2"}, {"h-lo", "1e-3"}, {"h-hi", "20"},
                      {"h-n", "81"}, {"threshold", "1e-4"}});
        } else {
            d.insert({{"m-list", "2,4,8,16,32,64"}, {"g-lo", "0.01"}, {"g-hi", "10"}, {"g-n", "61"},
                      {"Bs-lo", "0.01"}, {"Bs-hi", "1000"}, {"Bs-n", "81"}, {"constraint-tol", "1e-9"}});
        }
        return d;
    };
    opt.execute = optimize;
    cmds.push_back(opt);

    Command itf;
    itf.path = "interference";
    itf.help = "Monte Carlo interference and SINR surfaces";
    itf.options = {{"mode", "surface | intra | inter | n-sweep"},
                   {"n", "m-sequence degree"},
                   {"active", "signals per cell"},
                   {"cells", "interfering cells"},
                   {"kind", "ensemble: walsh | shift"},
                   {"trials", "Monte Carlo trials per point"},
                   {"noise-db", "noise power relative to unit signal, dB"},
                   {"weight", "amplitude weight per interfering cell"},
                   {"path-loss", "path-loss index per interfering cell"},
                   {"timing-max", "surface timing std upper end, chips"},
                   {"phase-max", "surface phase std upper end, rad"},
                   {"grid", "surface points per axis"},
                   {"timing", "timing error std, chips"},
                   {"phase", "phase error std, rad"},
                   {"ladder", "intra error scale factors"},
                   {"n-list", "n-sweep degrees"}};
    itf.defaults = [](const std::string& mode) {
        Defaults d{{"mode", "surface"}, {"n", "7"},      {"active", "8"},     {"kind", "walsh"},
                   {"trials", "1000"},  {"weight", "1"}, {"path-loss", "3"}};
        if (mode == "intra") {
            d.insert({{"cells", "0"}, {"timing", "0.2"}, {"phase", "0.2"}, {"ladder", "1,0.5,0.25,0.125,0.0625,0"}});
        } else if (mode == "inter") {
            d.insert({{"cells", "1"}, {"timing", "0"}, {"phase", "0"}});
        } else if (mode == "n-sweep") {
            d.insert({{"cells", "1"}, {"timing", "0"}, {"phase", "0"}, {"n-list", "8,10,12,14,16"}, {"active", "4"}});
        } else {
            d.insert({{"cells", "0"}, {"noise-db", "-113.101"}, {"timing-max", "0.5"}, {"phase-max", "0.5"},
                      {"grid", "20"}});
        }
        return d;
    };
    itf.execute = interference;
    cmds.push_back(itf);

    Command lim;
    lim.path = "mac limits";
    lim.help = "overhead infimum and capacity supremum";
    lim.options = {{"discipline", "md1 | mm1"}, {"L", "mean packet length, bits"}, {"p", "geometric parameter (mm1)"}};
    lim.defaults = [](const std::string&) { return Defaults{{"discipline", "md1"}, {"L", "1000"}}; };
    lim.execute = mac_limits;
    cmds.push_back(lim);

    Command sim;
    sim.path = "mac simulate";
    sim.help = "single-server queue simulation of the TDMA channel";
    sim.options = {{"discipline", "md1 | mm1"},
                   {"L", "mean packet length, bits"},
                   {"p", "geometric parameter (mm1)"},
                   {"v", "normalized overhead (default v_inf)"},
                   {"loads", "offered loads G"},
                   {"warmup", "warm-up packets"},
                   {"packets", "measured packets"},
                   {"batches", "batch count for confidence intervals"},
                   {"confidence", "confidence level"},
                   {"target-hw", "target CI half-width"},
                   {"corruption", "exploratory per-transmission corruption probability"}};
    sim.defaults = [](const std::string&) {
        return Defaults{{"discipline", "md1"}, {"L", "1000"},       {"loads", "0.2,0.4,0.6,0.8,1,1.2,1.4,1.6,1.8,2"},
                        {"warmup", "10000"},   {"packets", "100000"}, {"batches", "20"},
                        {"confidence", "0.95"}, {"target-hw", "0.01"}, {"corruption", "0"}};
    };
    sim.execute = mac_simulate;
    cmds.push_back(sim);

    Command alloc;
    alloc.path = "mac allocate";
    alloc.help = "proportional m-sequence identifier allocation";
    alloc.options = {{"n", "window length (m-sequence degree)"},
                     {"req", "bandwidth requests, comma separated"},
                     {"poly", "primitive polynomial mask (default: smallest)"}};
    alloc.required = {"req"};
    alloc.defaults = [](const std::string&) { return Defaults{{"n", "3"}}; };
    alloc.execute = mac_allocate;
    cmds.push_back(alloc);

    return cmds;
}

inline std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    std::map<std::string, std::string> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos || line[a] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto l = s.find_first_not_of(" \t\r");
            const auto r = s.find_last_not_of(" \t\r");
            return l == std::string::npos ? std::string() : s.substr(l, r - l + 1);
        };
        out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return out;
}

inline std::uint64_t parse_seed(const std::string& s, const std::string& source) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw UsageError("invalid seed '" + s + "' from " + source);
    return v;
}

struct Leaf {
    const Command* command = nullptr;
    CLI::App* app = nullptr;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::string config_path, out_path, format, seed;
    bool verbose = false;
};

inline std::vector<std::string> replay_args(const report::Header& h) {
    std::vector<std::string> args = Params::split(h.command, ' ');
    for (const auto& [k, v] : h.config) {
        if (v == "true" && (k == "sweep" || k == "no-reduction")) {
            args.push_back("--" + k);
        } else if (v == "false" && (k == "sweep" || k == "no-reduction")) {
            continue;
        } else {
            args.push_back("--" + k + "=" + v);
        }
    }
    args.push_back("--seed=" + std::to_string(h.seed));
    return args;
}

}  // namespace detail

namespace detail {

inline int run_leaf(Leaf& leaf, std::ostream& out, std::ostream& err) {
    const Command& cmd = *leaf.command;
    std::map<std::string, std::string> file;
    if (!leaf.config_path.empty()) file = read_config_file(leaf.config_path);

    std::map<std::string, std::string> explicit_values;
    for (const auto& o : cmd.options) {
        const std::string flag = "--" + o.name;
        if (leaf.app->count(flag) == 0) continue;
        explicit_values[o.name] = o.flag ? (leaf.flags[o.name] ? "true" : "false") : leaf.values[o.name];
    }
    const std::string format_key = "format";
    std::optional<std::string> seed_text;
    std::string seed_source;
    if (leaf.app->count("--seed")) {
        seed_text = leaf.seed;
        seed_source = "--seed";
    }
    std::optional<std::string> format;
    if (leaf.app->count("--format")) format = leaf.format;

    for (const auto& [k, v] : file) {
        if (k == "seed") {
            if (!seed_text) {
                seed_text = v;
                seed_source = "config file";
            }
            continue;
        }
        if (k == format_key) {
            if (!format) format = v;
            continue;
        }
        const bool known = std::any_of(cmd.options.begin(), cmd.options.end(), [&](const auto& o) { return o.name == k; });
        if (!known) throw UsageError("unknown key '" + k + "' in config file for " + cmd.path);
    }

    auto pick = [&](const std::string& key) -> std::optional<std::string> {
        if (auto it = explicit_values.find(key); it != explicit_values.end()) return it->second;
        if (auto it = file.find(key); it != file.end()) return it->second;
        return std::nullopt;
    };
    const auto mode = pick("mode");
    auto resolved = cmd.defaults(mode.value_or(""));
    if (!mode && resolved.count("mode")) resolved = cmd.defaults(resolved.at("mode"));
    for (const auto& o : cmd.options)
        if (auto v = pick(o.name)) resolved[o.name] = *v;
    for (const auto& o : cmd.options)
        if (o.flag && resolved.count(o.name) && resolved[o.name] == "false") resolved.erase(o.name);
    for (const auto& r : cmd.required)
        if (!resolved.count(r)) throw UsageError("missing required option --" + r + " for " + cmd.path);

    const std::string fmt = format.value_or("csv");
    if (fmt != "csv" && fmt != "json") throw UsageError("--format must be csv or json");
    resolved[format_key] = fmt;

    std::uint64_t seed = kDefaultSeed;
    if (seed_text) {
        seed = parse_seed(*seed_text, seed_source);
    } else if (const char* env = std::getenv(kSeedEnv); env && *env) {
        seed = parse_seed(env, kSeedEnv);
    }

    const Params params(resolved, seed);
    if (leaf.verbose) err << "invcrit: running " << cmd.path << " (seed " << seed << ")\n";
    const Outcome result = cmd.execute(params);

    report::Header header{cmd.path, resolved, seed};
    const auto f = fmt == "json" ? report::Format::Json : report::Format::Csv;
    if (!leaf.out_path.empty()) {
        std::ofstream file_out(leaf.out_path, std::ios::binary);
        if (!file_out) throw UsageError("cannot write " + leaf.out_path);
        report::write(file_out, f, header, result.table);
    } else {
        report::write(out, f, header, result.table);
    }
    if (result.code == kInfeasible) err << "invcrit: infeasible constraint set; certificate row is the least-violating point\n";
    return result.code;
}

}  // namespace detail

/// Entry point; `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    const auto cmds = detail::commands();
    CLI::App app{"invcrit: invariant efficiency criteria toolkit", "invcrit"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(report::kToolVersion));

    std::vector<std::unique_ptr<detail::Leaf>> leaves;
    CLI::App* mac = app.add_subcommand("mac", "MAC capacity limits, simulation and allocation");
    mac->require_subcommand(1);
    for (const auto& cmd : cmds) {
        auto leaf = std::make_unique<detail::Leaf>();
        leaf->command = &cmd;
        const bool nested = cmd.path.rfind("mac ", 0) == 0;
        const std::string name = nested ? cmd.path.substr(4) : cmd.path;
        leaf->app = (nested ? mac : &app)->add_subcommand(name, cmd.help);
        for (const auto& o : cmd.options) {
            if (o.flag) {
                leaf->app->add_flag("--" + o.name, leaf->flags[o.name], o.help);
            } else {
                leaf->app->add_option("--" + o.name, leaf->values[o.name], o.help);
            }
        }
        leaf->app->add_option("--config", leaf->config_path, "flat key=value file; flags override it");
        leaf->app->add_option("--out", leaf->out_path, "output file (default: stdout)");
        leaf->app->add_option("--format", leaf->format, "csv | json");
        leaf->app->add_option("--seed", leaf->seed, std::string("root seed (default: $") + cli::kSeedEnv + " or 1)");
        leaf->app->add_flag("--verbose", leaf->verbose, "progress messages on stderr");
        leaves.push_back(std::move(leaf));
    }
    std::string replay_from, replay_out;
    CLI::App* replay = app.add_subcommand("replay", "regenerate an output from its embedded header");
    replay->add_option("--from", replay_from, "previously written output")->required();
    replay->add_option("--out", replay_out, "output file (default: stdout)");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (replay->parsed()) {
            std::ifstream in(replay_from, std::ios::binary);
            if (!in) throw UsageError("cannot read " + replay_from);
            std::stringstream buf;
            buf << in.rdbuf();
            report::Header h;
            if (!report::parse_header(buf.str(), h)) throw UsageError(replay_from + " has no invcrit header");
            auto again = detail::replay_args(h);
            if (!replay_out.empty()) again.push_back("--out=" + replay_out);
            return run(again, out, err);
        }
        for (auto& leaf : leaves)
            if (leaf->app->parsed()) return detail::run_leaf(*leaf, out, err);
        throw UsageError("no command given");
    } catch (const UsageError& e) {
        err << "invcrit: usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const Infeasible& e) {
        err << "invcrit: infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const NumericalError& e) {
        err << "invcrit: numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::domain_error& e) {
        err << "invcrit: domain error: " << e.what() << '\n';
        return kUsage;
    } catch (const std::out_of_range& e) {
        err << "invcrit: out of range: " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "invcrit: error: " << e.what() << '\n';
        return kNumerical;
    }
}

}  // namespace invcrit::cli
