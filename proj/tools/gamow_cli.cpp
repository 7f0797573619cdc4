// gamow: resonance poles, Gamow/bound/scattering states, and
// Gaussian-regularized inner products of 1-D piecewise-constant
// potentials. Subcommands: poles, state-eval, product, sweep, cone-map,
// selftest. Exit codes: 0 success, 1 domain error (module error name on
// stderr), 2 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gamow/io.hpp"
#include "gamow/selftest.hpp"

namespace {

using namespace gamow;

// ---------------------------------------------------------------- output

void emit(const std::string& text, const std::string& output_path)
{
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw error(errc::bad_config, "cannot open output file: " + output_path);
    out << text;
}

// ------------------------------------------------------------ env knobs

double env_double(const char* name, double fallback)
{
    const char* s = std::getenv(name);
    if (!s || !*s) return fallback;
    char* end = nullptr;
    double v = std::strtod(s, &end);
    if (end == s || *end != '\0' || !(v > 0.0))
        throw error(errc::bad_config, std::string(name) + " must be a positive number");
    return v;
}

ResonanceSearchOptions search_options_from_env()
{
    ResonanceSearchOptions opts;
    opts.p_im_max = env_double("GAMOW_POLE_IM_MAX", opts.p_im_max);
    opts.p_re_limit = env_double("GAMOW_POLE_RE_LIMIT", opts.p_re_limit);
    return opts;
}

void apply_tolerance_env()
{
    zero_threshold() = env_double("GAMOW_ZERO_TOL", zero_threshold());
    marginal_ray_tol() = env_double("GAMOW_RAY_TOL", marginal_ray_tol());
}

// --------------------------------------------------------- pole sourcing

double bound_q_max(const PotentialProfile& profile)
{
    double depth = 0.0;
    for (const auto& s : profile.segments()) depth = std::max(depth, -s.u);
    if (!(depth > 0.0))
        throw error(errc::bad_config, "profile has no well: no bound states exist");
    return std::sqrt(depth) * (1.0 - 1e-9);
}

// Poles for the run: from a cache file when given, otherwise freshly
// computed. `n_res` counts the resonances (Re p > 0) that must be
// available; `want_bound` adds the full bound ladder.
std::vector<Pole> obtain_poles(const PotentialProfile& profile, const std::string& cache_path,
                               int n_res, bool want_bound)
{
    if (!cache_path.empty()) {
        std::ifstream in(cache_path);
        if (!in) throw error(errc::bad_config, "cannot open pole cache: " + cache_path);
        json j;
        try {
            in >> j;
        } catch (const json::exception& e) {
            throw error(errc::bad_config, "pole cache parse failure: " + std::string(e.what()));
        }
        auto poles = pole_cache_from_json(j, profile);
        int have_res = 0;
        bool have_bound = false;
        for (const auto& p : poles) {
            if (p.kind == PoleKind::resonance && p.label > 0) have_res = std::max(have_res, p.label);
            if (p.kind == PoleKind::bound) have_bound = true;
        }
        if (have_res < n_res)
            throw error(errc::bad_config, "pole cache holds " + std::to_string(have_res) +
                                              " resonances, need " + std::to_string(n_res));
        if (want_bound && !have_bound && n_res >= 0) {
            auto extra = find_bound_states(profile, bound_q_max(profile));
            poles.insert(poles.end(), extra.begin(), extra.end());
        }
        return poles;
    }
    std::vector<Pole> poles;
    if (n_res > 0) poles = find_resonances(profile, n_res, search_options_from_env());
    if (want_bound) {
        auto extra = find_bound_states(profile, bound_q_max(profile));
        poles.insert(poles.end(), extra.begin(), extra.end());
    }
    return poles;
}

const Pole& resonance_by_label(const std::vector<Pole>& poles, int n)
{
    for (const auto& p : poles)
        if (p.kind == PoleKind::resonance && p.label == n) return p;
    throw error(errc::bad_config, "resonance " + std::to_string(n) + " not available");
}

const Pole& bound_by_index(const std::vector<Pole>& poles, int i)
{
    for (const auto& p : poles)
        if (p.kind == PoleKind::bound && p.label == i) return p;
    throw error(errc::bad_config, "bound state " + std::to_string(i) + " not available");
}

// ------------------------------------------------------- state selectors

// Grammar: gamow:n | gamow-in:n | bound:i | scatter:p
//   n: signed nonzero integer (negative selects the mirror pole)
//   i: integer >= 1; p: positive decimal momentum
struct Selector {
    std::string family;
    std::string arg;
    std::string text;
};

Selector parse_selector(const std::string& s)
{
    auto colon = s.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 >= s.size())
        throw CLI::ValidationError("state selector", "expected family:arg, got '" + s + "'");
    Selector sel{s.substr(0, colon), s.substr(colon + 1), s};
    if (sel.family != "gamow" && sel.family != "gamow-in" && sel.family != "bound" &&
        sel.family != "scatter")
        throw CLI::ValidationError("state selector",
                                   "unknown family '" + sel.family + "' in '" + s + "'");
    return sel;
}

int selector_int(const Selector& sel)
{
    try {
        std::size_t used = 0;
        int v = std::stoi(sel.arg, &used);
        if (used != sel.arg.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw CLI::ValidationError("state selector", "bad integer in '" + sel.text + "'");
    }
}

double selector_double(const Selector& sel)
{
    try {
        std::size_t used = 0;
        double v = std::stod(sel.arg, &used);
        if (used != sel.arg.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw CLI::ValidationError("state selector", "bad number in '" + sel.text + "'");
    }
}

// How many resonances / whether bound states a selector requires.
void selector_needs(const Selector& sel, int& n_res, bool& want_bound)
{
    if (sel.family == "gamow" || sel.family == "gamow-in") {
        int n = selector_int(sel);
        if (n == 0) throw CLI::ValidationError("state selector", "label 0 in '" + sel.text + "'");
        n_res = std::max(n_res, std::abs(n));
    } else if (sel.family == "bound") {
        want_bound = true;
    }
}

PlanewaveState build_state(const PotentialProfile& profile, const std::vector<Pole>& poles,
                           const Selector& sel)
{
    if (sel.family == "gamow" || sel.family == "gamow-in") {
        int n = selector_int(sel);
        const Pole& base = resonance_by_label(poles, std::abs(n));
        Pole use = n > 0 ? base : mirror_pole(profile, base);
        return gamow_state(profile, use,
                           sel.family == "gamow" ? Direction::out : Direction::in);
    }
    if (sel.family == "bound") return bound_state(profile, bound_by_index(poles, selector_int(sel)));
    return scattering_state(profile, selector_double(sel));
}

// --------------------------------------------------------------- shared

struct Common {
    std::string profile_path;
    std::string output_path;
    std::string format = "csv";
    std::string pole_cache;
};

void add_common(CLI::App* cmd, Common& c, const char* default_format)
{
    c.format = default_format;
    cmd->add_option("--profile", c.profile_path, "potential profile JSON file")->required();
    cmd->add_option("--output", c.output_path, "output file (default: stdout)");
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

json verdict_to_json(const ProductVerdict& v)
{
    json per = json::array();
    for (const auto& t : v.per_term)
        per.push_back({{"re_k", t.k.real()}, {"im_k", t.k.imag()}, {"class", tail_kind_name(t.kind)}});
    return {{"verdict", verdict_kind_name(v.kind)},
            {"re_value", v.value.real()},
            {"im_value", v.value.imag()},
            {"rate_coefficient", v.rate_coefficient},
            {"prescription", prescription_name(v.prescription)},
            {"per_term", per}};
}

char verdict_code(VerdictKind k)
{
    switch (k) {
        case VerdictKind::Zero:           return 'Z';
        case VerdictKind::Finite:         return 'F';
        case VerdictKind::Divergent:      return 'D';
        case VerdictKind::Distributional: return 'S';
        case VerdictKind::Marginal:       return 'M';
    }
    return '?';
}

std::pair<int, int> parse_range(const std::string& s)
{
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) throw std::invalid_argument("no ..");
        int lo = std::stoi(s.substr(0, dots));
        int hi = std::stoi(s.substr(dots + 2));
        if (lo > hi) throw std::invalid_argument("descending");
        return {lo, hi};
    } catch (const std::exception&) {
        throw CLI::ValidationError("range", "expected LO..HI with LO <= HI, got '" + s + "'");
    }
}

// ----------------------------------------------------------- subcommands

int cmd_poles(const Common& c, int count, bool with_bound)
{
    auto profile = load_profile(c.profile_path);
    auto poles = obtain_poles(profile, c.pole_cache, count, with_bound);
    if (c.format == "csv") {
        emit(poles_to_csv(poles), c.output_path);
    } else {
        emit(json_dump(pole_cache_to_json(profile, poles)), c.output_path);
    }
    return 0;
}

int cmd_state_eval(const Common& c, const std::string& sel_text, double x_min, double x_max,
                   int points)
{
    if (!(x_min < x_max)) throw CLI::ValidationError("state-eval", "need --x-min < --x-max");
    if (points < 2) throw CLI::ValidationError("state-eval", "need --points >= 2");
    Selector sel = parse_selector(sel_text);
    auto profile = load_profile(c.profile_path);
    int n_res = 0;
    bool want_bound = false;
    selector_needs(sel, n_res, want_bound);
    auto poles = obtain_poles(profile, c.pole_cache, n_res, want_bound);
    auto st = build_state(profile, poles, sel);

    json rows = json::array();
    std::string csv = "x,re_u,im_u,abs_u\n";
    for (int j = 0; j < points; ++j) {
        double x = x_min + (x_max - x_min) * j / (points - 1);
        complex u = st.value(x);
        if (c.format == "csv")
            csv += format_g17(x) + ',' + format_g17(u.real()) + ',' + format_g17(u.imag()) + ',' +
                   format_g17(std::abs(u)) + '\n';
        else
            rows.push_back({x, u.real(), u.imag(), std::abs(u)});
    }
    if (c.format == "csv")
        emit(csv, c.output_path);
    else
        emit(json_dump({{"state", sel_text}, {"family", family_name(st.family)}, {"rows", rows}}),
             c.output_path);
    return 0;
}

int cmd_product(const Common& c, const std::string& a_text, const std::string& b_text,
                const std::string& kind_text, const std::string& prescription_text)
{
    if (c.format != "json")
        throw CLI::ValidationError("product", "verdicts are emitted as JSON only");
    Selector sa = parse_selector(a_text), sb = parse_selector(b_text);
    auto profile = load_profile(c.profile_path);
    int n_res = 0;
    bool want_bound = false;
    selector_needs(sa, n_res, want_bound);
    selector_needs(sb, n_res, want_bound);
    auto poles = obtain_poles(profile, c.pole_cache, n_res, want_bound);
    auto a = build_state(profile, poles, sa);
    auto b = build_state(profile, poles, sb);

    ProductKind kind = kind_text == "standard" ? ProductKind::standard : ProductKind::symmetric;
    Prescription pres =
        prescription_text == "zeldovich" ? Prescription::zeldovich : Prescription::romo;
    auto v = product_limit(a, b, kind, pres);
    json out = verdict_to_json(v);
    out["a"] = a_text;
    out["b"] = b_text;
    out["kind"] = kind_text;
    emit(json_dump(out), c.output_path);
    return 0;
}

int cmd_sweep(const Common& c, const std::string& a_text, const std::string& b_text,
              const std::string& kind_text, const std::string& schedule_text, double lambda_max,
              double lambda_min, int points)
{
    std::vector<double> schedule;
    if (!schedule_text.empty()) {
        std::istringstream in(schedule_text);
        std::string cell;
        while (std::getline(in, cell, ',')) {
            try {
                schedule.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw CLI::ValidationError("sweep", "bad schedule entry '" + cell + "'");
            }
        }
    } else {
        if (points < 2) throw CLI::ValidationError("sweep", "need --points >= 2");
        for (int j = 0; j < points; ++j)
            schedule.push_back(lambda_max *
                               std::pow(lambda_min / lambda_max, double(j) / (points - 1)));
    }

    Selector sa = parse_selector(a_text), sb = parse_selector(b_text);
    auto profile = load_profile(c.profile_path);
    int n_res = 0;
    bool want_bound = false;
    selector_needs(sa, n_res, want_bound);
    selector_needs(sb, n_res, want_bound);
    auto poles = obtain_poles(profile, c.pole_cache, n_res, want_bound);
    auto a = build_state(profile, poles, sa);
    auto b = build_state(profile, poles, sb);
    ProductKind kind = kind_text == "standard" ? ProductKind::standard : ProductKind::symmetric;

    auto rec = lambda_sweep(a, b, kind, schedule);
    if (c.format == "csv") {
        std::string csv = "lambda,log10_mag,phase\n";
        for (std::size_t j = 0; j < rec.schedule.size(); ++j)
            csv += format_g17(rec.schedule[j]) + ',' + format_g17(rec.values[j].log10_mag) + ',' +
                   format_g17(rec.values[j].phase) + '\n';
        csv += std::string("# verdict,") + verdict_kind_name(rec.verdict) + '\n';
        if (std::isfinite(rec.fitted_decay_slope))
            csv += "# fitted_decay_slope," + format_g17(rec.fitted_decay_slope) + '\n';
        if (std::isfinite(rec.fitted_growth_coefficient))
            csv += "# fitted_growth_coefficient," + format_g17(rec.fitted_growth_coefficient) + '\n';
        emit(csv, c.output_path);
    } else {
        json values = json::array();
        for (std::size_t j = 0; j < rec.schedule.size(); ++j)
            values.push_back({{"lambda", rec.schedule[j]},
                              {"log10_mag", rec.values[j].log10_mag},
                              {"phase", rec.values[j].phase}});
        json out = {{"a", a_text},
                    {"b", b_text},
                    {"kind", kind_text},
                    {"values", values},
                    {"verdict", verdict_kind_name(rec.verdict)}};
        if (std::isfinite(rec.fitted_decay_slope))
            out["fitted_decay_slope"] = rec.fitted_decay_slope;
        if (std::isfinite(rec.fitted_growth_coefficient))
            out["fitted_growth_coefficient"] = rec.fitted_growth_coefficient;
        emit(json_dump(out), c.output_path);
    }
    return 0;
}

int cmd_cone_map(const Common& c, const std::string& rows_text, const std::string& cols_text,
                 const std::string& grid_text, const std::string& kind_text)
{
    if (cols_text.empty() == grid_text.empty())
        throw CLI::ValidationError("cone-map", "give exactly one of --cols or --real-grid");
    auto [row_lo, row_hi] = parse_range(rows_text);
    ProductKind kind = kind_text == "standard" ? ProductKind::standard : ProductKind::symmetric;

    std::vector<int> row_labels;
    for (int n = row_lo; n <= row_hi; ++n)
        if (n != 0) row_labels.push_back(n);
    if (row_labels.empty()) throw CLI::ValidationError("cone-map", "empty row range");

    int n_res = std::max(std::abs(row_lo), std::abs(row_hi));
    std::vector<int> col_labels;
    std::vector<double> col_momenta;
    if (!cols_text.empty()) {
        auto [col_lo, col_hi] = parse_range(cols_text);
        for (int m = col_lo; m <= col_hi; ++m)
            if (m != 0) col_labels.push_back(m);
        if (col_labels.empty()) throw CLI::ValidationError("cone-map", "empty column range");
        n_res = std::max({n_res, std::abs(col_lo), std::abs(col_hi)});
    } else {
        double lo, hi;
        int count;
        char sep1, sep2;
        std::istringstream in(grid_text);
        if (!(in >> lo >> sep1 >> hi >> sep2 >> count) || sep1 != ':' || sep2 != ':' ||
            !in.eof() || !(lo > 0.0) || !(lo < hi) || count < 2)
            throw CLI::ValidationError("cone-map",
                                       "expected --real-grid MIN:MAX:COUNT with 0 < MIN < MAX, "
                                       "COUNT >= 2, got '" + grid_text + "'");
        for (int j = 0; j < count; ++j)
            col_momenta.push_back(lo + (hi - lo) * j / (count - 1));
    }

    auto profile = load_profile(c.profile_path);
    auto poles = obtain_poles(profile, c.pole_cache, n_res, false);
    std::vector<PlanewaveState> row_states, col_states;
    for (int n : row_labels) row_states.push_back(build_state(profile, poles, parse_selector("gamow:" + std::to_string(n))));
    if (!col_labels.empty())
        for (int m : col_labels) col_states.push_back(build_state(profile, poles, parse_selector("gamow:" + std::to_string(m))));
    else
        for (double p : col_momenta) col_states.push_back(scattering_state(profile, p));

    std::vector<std::string> code_rows;
    for (const auto& ra : row_states) {
        std::string codes;
        for (const auto& cb : col_states)
            codes += verdict_code(product_limit(ra, cb, kind).kind);
        code_rows.push_back(codes);
    }

    if (c.format == "csv") {
        std::string csv = col_labels.empty() ? "n\\p" : "n\\m";
        if (!col_labels.empty())
            for (int m : col_labels) csv += ',' + std::to_string(m);
        else
            for (double p : col_momenta) csv += ',' + format_g17(p);
        csv += '\n';
        for (std::size_t r = 0; r < row_labels.size(); ++r) {
            csv += std::to_string(row_labels[r]);
            for (char code : code_rows[r]) csv += std::string(",") + code;
            csv += '\n';
        }
        emit(csv, c.output_path);
    } else {
        json cols = json::array();
        if (!col_labels.empty())
            for (int m : col_labels) cols.push_back(m);
        else
            for (double p : col_momenta) cols.push_back(p);
        json codes = json::array();
        for (std::size_t r = 0; r < row_labels.size(); ++r) {
            json row = json::array();
            for (char code : code_rows[r]) row.push_back(std::string(1, code));
            codes.push_back(row);
        }
        emit(json_dump({{"kind", kind_text},
                        {"rows", row_labels},
                        {"cols", cols},
                        {"codes", codes}}),
             c.output_path);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"resonance poles and regularized inner products of 1-D piecewise-constant "
                 "potentials"};
    app.require_subcommand(1);

    Common poles_c, eval_c, product_c, sweep_c, cone_c;
    int poles_count = 5;
    bool poles_bound = false;
    std::string eval_state;
    double eval_min = -2.0, eval_max = 3.0;
    int eval_points = 201;
    std::string prod_a, prod_b, prod_kind = "standard", prod_pres = "zeldovich";
    std::string sweep_a, sweep_b, sweep_kind = "standard", sweep_schedule;
    double sweep_max = 1e-1, sweep_min = 1e-5;
    int sweep_points = 5;
    std::string cone_rows, cone_cols, cone_grid, cone_kind = "standard";

    auto* poles_cmd = app.add_subcommand("poles", "locate and certify poles");
    add_common(poles_cmd, poles_c, "csv");
    poles_cmd->add_option("--count", poles_count, "number of resonances")->check(CLI::PositiveNumber);
    poles_cmd->add_flag("--bound", poles_bound, "include the bound-state ladder");
    poles_cmd->add_option("--pole-cache", poles_c.pole_cache, "reuse a pole cache JSON file");

    auto* eval_cmd = app.add_subcommand("state-eval", "evaluate a wavefunction on a grid");
    add_common(eval_cmd, eval_c, "csv");
    eval_cmd->add_option("--state", eval_state, "state selector (gamow:n, gamow-in:n, bound:i, scatter:p)")->required();
    eval_cmd->add_option("--x-min", eval_min, "grid start");
    eval_cmd->add_option("--x-max", eval_max, "grid end");
    eval_cmd->add_option("--points", eval_points, "grid size");
    eval_cmd->add_option("--pole-cache", eval_c.pole_cache, "reuse a pole cache JSON file");

    auto* product_cmd = app.add_subcommand("product", "regularized inner-product verdict");
    add_common(product_cmd, product_c, "json");
    product_cmd->add_option("--a", prod_a, "first state selector")->required();
    product_cmd->add_option("--b", prod_b, "second state selector")->required();
    product_cmd->add_option("--kind", prod_kind, "product kind")
        ->check(CLI::IsMember({"standard", "symmetric"}));
    product_cmd->add_option("--prescription", prod_pres, "regularization prescription")
        ->check(CLI::IsMember({"zeldovich", "romo"}));
    product_cmd->add_option("--pole-cache", product_c.pole_cache, "reuse a pole cache JSON file");

    auto* sweep_cmd = app.add_subcommand("sweep", "lambda sweep of a regularized product");
    add_common(sweep_cmd, sweep_c, "csv");
    sweep_cmd->add_option("--a", sweep_a, "first state selector")->required();
    sweep_cmd->add_option("--b", sweep_b, "second state selector")->required();
    sweep_cmd->add_option("--kind", sweep_kind, "product kind")
        ->check(CLI::IsMember({"standard", "symmetric"}));
    sweep_cmd->add_option("--schedule", sweep_schedule, "comma-separated descending lambdas");
    sweep_cmd->add_option("--lambda-max", sweep_max, "geometric schedule start");
    sweep_cmd->add_option("--lambda-min", sweep_min, "geometric schedule end");
    sweep_cmd->add_option("--points", sweep_points, "geometric schedule size");
    sweep_cmd->add_option("--pole-cache", sweep_c.pole_cache, "reuse a pole cache JSON file");

    auto* cone_cmd = app.add_subcommand("cone-map", "verdict-code matrix over state grids");
    add_common(cone_cmd, cone_c, "csv");
    cone_cmd->add_option("--rows", cone_rows, "Gamow labels LO..HI (0 skipped)")->required();
    cone_cmd->add_option("--cols", cone_cols, "Gamow labels LO..HI (0 skipped)");
    cone_cmd->add_option("--real-grid", cone_grid, "real momenta MIN:MAX:COUNT");
    cone_cmd->add_option("--kind", cone_kind, "product kind")
        ->check(CLI::IsMember({"standard", "symmetric"}));
    cone_cmd->add_option("--pole-cache", cone_c.pole_cache, "reuse a pole cache JSON file");

    auto* selftest_cmd = app.add_subcommand("selftest", "run the acceptance criteria");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        apply_tolerance_env();
        if (selftest_cmd->parsed()) return gamow::print_acceptance(stdout);
        if (poles_cmd->parsed()) return cmd_poles(poles_c, poles_count, poles_bound);
        if (eval_cmd->parsed())
            return cmd_state_eval(eval_c, eval_state, eval_min, eval_max, eval_points);
        if (product_cmd->parsed())
            return cmd_product(product_c, prod_a, prod_b, prod_kind, prod_pres);
        if (sweep_cmd->parsed())
            return cmd_sweep(sweep_c, sweep_a, sweep_b, sweep_kind, sweep_schedule, sweep_max,
                             sweep_min, sweep_points);
        if (cone_cmd->parsed())
            return cmd_cone_map(cone_c, cone_rows, cone_cols, cone_grid, cone_kind);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const gamow::error& e) {
        std::cerr << "error: " << e.what() << "\n"; // what() leads with the error name
        return 1;
    }
    return 2;
}
