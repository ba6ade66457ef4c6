#pragma once

#include <charconv>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fraclip/op.hpp"
#include "fraclip/region.hpp"
#include "fraclip/supsearch.hpp"
#include "fraclip/version.hpp"

namespace fraclip {

using json = nlohmann::json;

/// One fully-resolved run description: everything a command needs, with all
/// defaults made explicit so reports reproduce bit-for-bit.
struct Scenario {
    std::string task = "membership";
    std::uint64_t seed = 1;
    unsigned threads = 1;

    FracParams params = FracParams::make(1, 1, 0.5, 0.0, {Exponent::from_value(2)});
    bool recipe = false;
    double recipe_fraction = 0.5;
    bool related = false;  // w = prod v_i
    WeightPair pair;

    ConditionId condition = ConditionId::hcal;
    GridSpec grid;
    SupPolicy sup;
    EvalPolicy eval;
    OperatorQuad quad;

    std::vector<GridFunction> functions;
    int random_functions = 0;
    std::vector<double> x_values;
    std::optional<Ball> ball;
    double family_center = 0.5;
    double family_r_lo = 1e-2, family_r_hi = 1e2;
    int family_per_decade = 4;
    LipschitzVariant variant = LipschitzVariant::inverse_mass;
};

// ---------------------------------------------------------------------------
// JSON <-> domain types.
// ---------------------------------------------------------------------------

inline Exponent exponent_from_json(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "infinity") return Exponent::infinity();
        throw std::invalid_argument("exponent string must be \"inf\"");
    }
    return Exponent::from_value(j.get<double>());
}

inline json exponent_to_json(const Exponent& e) {
    if (e.is_infinite()) return json("inf");
    return json(e.value());
}

inline Weight weight_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "power")
        return Weight::power(j.at("exponent").get<double>(), j.value("coef", 1.0));
    if (kind == "tabulated") {
        std::vector<std::array<double, 2>> samples;
        for (const auto& row : j.at("samples"))
            samples.push_back({row.at(0).get<double>(), row.at(1).get<double>()});
        return Weight::tabulated(std::move(samples));
    }
    throw std::invalid_argument("weight kind must be \"power\" or \"tabulated\"");
}

inline json weight_to_json(const Weight& w) {
    json j;
    if (w.is_power()) {
        j["kind"] = "power";
        j["exponent"] = w.power_exponent();
        if (w.coefficient() != 1.0) j["coef"] = w.coefficient();
        return j;
    }
    j["kind"] = "tabulated";
    json rows = json::array();
    for (const auto& s : w.samples()) rows.push_back({s[0], s[1]});
    j["samples"] = rows;
    return j;
}

inline GridFunction grid_function_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const double lo = j.at("box").at(0).get<double>();
    const double hi = j.at("box").at(1).get<double>();
    if (kind == "indicator") return GridFunction::indicator(lo, hi);
    if (kind == "poly") return GridFunction::poly(lo, hi, j.at("coeffs").get<std::vector<double>>());
    if (kind == "samples")
        return GridFunction::samples(lo, hi, j.at("values").get<std::vector<double>>());
    throw std::invalid_argument("function kind must be indicator, poly or samples");
}

inline json grid_function_to_json(const GridFunction& f) {
    json j;
    const Box& b = f.support();
    j["box"] = {b.lo[0], b.hi[0]};
    switch (f.kind()) {
        case GridFunction::Kind::indicator: j["kind"] = "indicator"; break;
        case GridFunction::Kind::poly:
            j["kind"] = "poly";
            j["coeffs"] = f.coefficients();
            break;
        case GridFunction::Kind::samples:
            j["kind"] = "samples";
            j["values"] = f.sample_values();
            break;
    }
    return j;
}

inline Scenario parse_scenario(const json& j) {
    Scenario sc;
    sc.task = j.value("task", sc.task);
    sc.seed = j.value("seed", sc.seed);
    sc.threads = j.value("threads", sc.threads);

    const json& jp = j.at("params");
    std::vector<Exponent> p_vec;
    for (const auto& e : jp.at("p_vec")) p_vec.push_back(exponent_from_json(e));
    std::optional<std::vector<double>> split;
    if (jp.contains("gamma_split")) split = jp.at("gamma_split").get<std::vector<double>>();
    sc.params = FracParams::make(jp.at("n").get<int>(), jp.at("m").get<int>(),
                                 jp.at("gamma").get<double>(), jp.at("delta").get<double>(),
                                 std::move(p_vec), std::move(split));

    if (j.contains("weights")) {
        const json& jw = j.at("weights");
        sc.recipe = jw.value("recipe", false);
        sc.recipe_fraction = jw.value("recipe_fraction", 0.5);
        sc.related = jw.value("related", false);
        if (sc.recipe) {
            sc.pair = construct_member_pair(sc.params, sc.recipe_fraction).pair;
        } else {
            if (jw.contains("v")) {
                for (const auto& e : jw.at("v")) sc.pair.v.push_back(weight_from_json(e));
            } else {
                sc.pair.v.assign(static_cast<std::size_t>(sc.params.m), Weight::power(0.0));
            }
            if (static_cast<int>(sc.pair.v.size()) != sc.params.m)
                throw std::invalid_argument("weights.v must have m entries");
            if (sc.related || !jw.contains("w"))
                sc.pair.w = weight_product(sc.pair.v, 1.0);
            else
                sc.pair.w = weight_from_json(jw.at("w"));
        }
    } else {
        sc.pair.w = Weight::power(0.0);
        sc.pair.v.assign(static_cast<std::size_t>(sc.params.m), Weight::power(0.0));
    }

    if (j.contains("condition")) sc.condition = condition_id_from(j.at("condition"));
    if (j.contains("grid")) {
        const json& jg = j.at("grid");
        sc.grid.rho_lo = jg.value("rho_lo", sc.grid.rho_lo);
        sc.grid.rho_hi = jg.value("rho_hi", sc.grid.rho_hi);
        sc.grid.r_lo = jg.value("r_lo", sc.grid.r_lo);
        sc.grid.r_hi = jg.value("r_hi", sc.grid.r_hi);
        sc.grid.per_decade = jg.value("points_per_decade", sc.grid.per_decade);
        sc.grid.origin_axis = jg.value("origin_axis", sc.grid.origin_axis);
    }
    if (j.contains("thresholds")) {
        const json& jt = j.at("thresholds");
        sc.sup.stability_max = jt.value("stability_max", sc.sup.stability_max);
        sc.sup.slope_floor = jt.value("slope_floor", sc.sup.slope_floor);
        sc.sup.refine_passes = jt.value("refine_passes", sc.sup.refine_passes);
    }
    sc.sup.threads = sc.threads;
    if (j.contains("eval")) {
        const json& je = j.at("eval");
        sc.eval.ladder.tail_rel = je.value("tail_rel", sc.eval.ladder.tail_rel);
        sc.eval.ladder.max_annuli = je.value("max_annuli", sc.eval.ladder.max_annuli);
        sc.eval.ladder.min_annuli = je.value("min_annuli", sc.eval.ladder.min_annuli);
    }
    if (j.contains("operator")) {
        const json& jo = j.at("operator");
        sc.quad.subst_power = jo.value("subst_power", sc.quad.subst_power);
        sc.quad.sing_panels = jo.value("sing_panels", sc.quad.sing_panels);
        sc.quad.smooth_panels = jo.value("smooth_panels", sc.quad.smooth_panels);
        sc.quad.gauss_order = jo.value("gauss_order", sc.quad.gauss_order);
        sc.quad.target_rel = jo.value("target_rel", sc.quad.target_rel);
    }
    if (j.contains("functions"))
        for (const auto& jf : j.at("functions")) sc.functions.push_back(grid_function_from_json(jf));
    sc.random_functions = j.value("random_functions", 0);
    if (j.contains("x_values")) sc.x_values = j.at("x_values").get<std::vector<double>>();
    if (j.contains("ball")) {
        const json& jb = j.at("ball");
        sc.ball = Ball(Point::axis(jb.at("center").get<double>(), sc.params.n),
                       jb.at("radius").get<double>());
    }
    if (j.contains("ball_family")) {
        const json& jb = j.at("ball_family");
        sc.family_center = jb.value("center", sc.family_center);
        sc.family_r_lo = jb.value("r_lo", sc.family_r_lo);
        sc.family_r_hi = jb.value("r_hi", sc.family_r_hi);
        sc.family_per_decade = jb.value("per_decade", sc.family_per_decade);
    }
    if (j.contains("lipschitz_variant")) {
        const std::string v = j.at("lipschitz_variant").get<std::string>();
        if (v == "inverse_mass")
            sc.variant = LipschitzVariant::inverse_mass;
        else if (v == "sup_mass")
            sc.variant = LipschitzVariant::sup_mass;
        else
            throw std::invalid_argument("lipschitz_variant must be inverse_mass or sup_mass");
    }
    return sc;
}

inline json resolved_config(const Scenario& sc) {
    json j;
    j["task"] = sc.task;
    j["seed"] = sc.seed;
    j["threads"] = sc.threads;
    json jp;
    jp["n"] = sc.params.n;
    jp["m"] = sc.params.m;
    jp["gamma"] = sc.params.gamma;
    jp["gamma_split"] = sc.params.gamma_split;
    jp["delta"] = sc.params.delta;
    json pv = json::array();
    for (const auto& e : sc.params.p_vec) pv.push_back(exponent_to_json(e));
    jp["p_vec"] = pv;
    j["params"] = jp;

    json jw;
    jw["recipe"] = sc.recipe;
    jw["recipe_fraction"] = sc.recipe_fraction;
    jw["related"] = sc.related;
    if (!sc.recipe) {
        jw["w"] = weight_to_json(sc.pair.w);
        json vv = json::array();
        for (const auto& v : sc.pair.v) vv.push_back(weight_to_json(v));
        jw["v"] = vv;
    }
    j["weights"] = jw;

    j["condition"] = condition_id_name(sc.condition);
    j["grid"] = {{"rho_lo", sc.grid.rho_lo},
                 {"rho_hi", sc.grid.rho_hi},
                 {"r_lo", sc.grid.r_lo},
                 {"r_hi", sc.grid.r_hi},
                 {"points_per_decade", sc.grid.per_decade},
                 {"origin_axis", sc.grid.origin_axis}};
    j["thresholds"] = {{"stability_max", sc.sup.stability_max},
                       {"slope_floor", sc.sup.slope_floor},
                       {"refine_passes", sc.sup.refine_passes}};
    j["eval"] = {{"tail_rel", sc.eval.ladder.tail_rel},
                 {"max_annuli", sc.eval.ladder.max_annuli},
                 {"min_annuli", sc.eval.ladder.min_annuli}};
    j["operator"] = {{"subst_power", sc.quad.subst_power},
                     {"sing_panels", sc.quad.sing_panels},
                     {"smooth_panels", sc.quad.smooth_panels},
                     {"gauss_order", sc.quad.gauss_order},
                     {"target_rel", sc.quad.target_rel}};
    if (!sc.functions.empty()) {
        json jf = json::array();
        for (const auto& f : sc.functions) jf.push_back(grid_function_to_json(f));
        j["functions"] = jf;
    }
    j["random_functions"] = sc.random_functions;
    if (!sc.x_values.empty()) j["x_values"] = sc.x_values;
    if (sc.ball)
        j["ball"] = {{"center", sc.ball->center[0]}, {"radius", sc.ball->radius}};
    j["ball_family"] = {{"center", sc.family_center},
                        {"r_lo", sc.family_r_lo},
                        {"r_hi", sc.family_r_hi},
                        {"per_decade", sc.family_per_decade}};
    j["lipschitz_variant"] =
        sc.variant == LipschitzVariant::inverse_mass ? "inverse_mass" : "sup_mass";
    return j;
}

// ---------------------------------------------------------------------------
// Reports.
// ---------------------------------------------------------------------------

inline json slope_to_json(const SlopeFit& f) {
    return {{"slope", f.slope}, {"ci_half", f.ci_half}, {"points", f.points}, {"valid", f.valid}};
}

inline json certificate_json(const Certificate& cert, const Scenario& sc) {
    json j;
    j["version"] = kVersion;
    j["kind"] = "membership_certificate";
    j["condition"] = condition_id_name(cert.id);
    j["verdict"] = verdict_name(cert.membership);
    j["region"] = region_name(cert.region);
    j["evidence_note"] =
        "numerical sup-search evidence over a finite grid of balls; not a formal proof";
    j["sup"] = {{"value", cert.sup.sup},
                {"argmax", {{"center_norm", cert.sup.argmax.center_norm()},
                            {"radius", cert.sup.argmax.radius}}},
                {"stability", cert.sup.stability},
                {"hit_infinite", cert.sup.hit_infinite},
                {"blowup_r_to_zero", slope_to_json(cert.sup.r_to_zero)},
                {"blowup_r_to_inf", slope_to_json(cert.sup.r_to_inf)},
                {"blowup_center_to_inf", slope_to_json(cert.sup.center_to_inf)}};
    j["hypothesis_checks"] = {{"all_power", cert.checks.all_power},
                              {"rh_infty_unit", cert.checks.rh_infty_unit},
                              {"doubling_dual", cert.checks.doubling_dual},
                              {"rh_m_dual", cert.checks.rh_m_dual}};
    if (!cert.divergence_reason.empty()) j["divergence_reason"] = cert.divergence_reason;
    j["approximate_weights"] = cert.approximate_weights;
    j["resolved_config"] = resolved_config(sc);
    return j;
}

namespace detail {

/// Shortest round-trip decimal form; CSV consumers reparse values exactly.
inline std::string fmt_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        out += c;
    }
    out += "\"";
    return out;
}

}  // namespace detail

inline std::string condition_rows_csv(const std::vector<ConditionValue>& rows) {
    std::ostringstream os;
    os << "condition_id,xb_norm,radius,value,breakdown\n";
    for (const auto& cv : rows) {
        json blob;
        blob["prefactor"] = cv.prefactor;
        blob["factors"] = cv.factors;
        if (!cv.divergence.empty()) blob["divergence"] = cv.divergence;
        os << condition_id_name(cv.id) << ',' << detail::fmt_double(cv.ball.center_norm())
           << ',' << detail::fmt_double(cv.ball.radius) << ','
           << detail::fmt_double(cv.value) << ',' << detail::csv_quote(blob.dump()) << '\n';
    }
    return os.str();
}

inline std::string oscillation_csv(const OscillationReport& rep) {
    std::ostringstream os;
    os << "radius,quotient,ratio\n";
    for (const auto& row : rep.rows)
        os << detail::fmt_double(row.radius) << ',' << detail::fmt_double(row.quotient) << ','
           << detail::fmt_double(row.ratio) << '\n';
    return os.str();
}

inline std::string region_csv(const RegionMapSpec& spec) {
    std::ostringstream os;
    os << "gamma,inv_p,delta,label\n";
    for (double gamma : spec.gammas)
        for (const auto& cell : region_grid(gamma, spec))
            os << detail::fmt_double(gamma) << ',' << detail::fmt_double(cell.inv_p) << ','
               << detail::fmt_double(cell.delta) << ',' << region_name(cell.label) << '\n';
    return os.str();
}

/// Deterministic SVG of the admissibility panels, rendered from the same
/// cell grid the CSV carries: per-column admissible extent, the boundary
/// line delta = gamma - n/p, the cap delta = 1, and the open corner.
inline std::string region_svg(const RegionMapSpec& spec) {
    const int pw = 300, ph = 330, margin = 55, gap = 30;
    const int width = margin + static_cast<int>(spec.gammas.size()) * (pw + gap);
    const int height = ph + 2 * margin;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t g = 0; g < spec.gammas.size(); ++g) {
        const double gamma = spec.gammas[g];
        const double x0 = margin + static_cast<double>(g) * (pw + gap);
        const double y0 = margin;
        auto sx = [&](double inv_p) { return x0 + inv_p / spec.m * pw; };
        auto sy = [&](double delta) {
            return y0 + (spec.delta_hi - delta) / (spec.delta_hi - spec.delta_lo) * ph;
        };
        const auto cells = region_grid(gamma, spec);
        const int nodes = spec.cells + 1;
        for (int i = 0; i < nodes; ++i) {
            double lo = kInf, hi = -kInf, inv_p = 0.0;
            for (int jj = 0; jj < nodes; ++jj) {
                const auto& c = cells[static_cast<std::size_t>(i) * nodes + jj];
                inv_p = c.inv_p;
                if (c.label == Region::admissible) {
                    lo = std::min(lo, c.delta);
                    hi = std::max(hi, c.delta);
                }
            }
            if (!(hi >= lo)) continue;
            const double w = static_cast<double>(pw) / spec.cells;
            os << "<rect x=\"" << detail::fmt_double(sx(inv_p) - 0.5 * w) << "\" y=\""
               << detail::fmt_double(sy(hi)) << "\" width=\"" << detail::fmt_double(w)
               << "\" height=\"" << detail::fmt_double(sy(lo) - sy(hi))
               << "\" fill=\"#9fe3cf\" stroke=\"none\"/>\n";
        }
        // boundary delta = gamma - n/p and the cap delta = 1
        os << "<polyline fill=\"none\" stroke=\"#205060\" stroke-width=\"1.5\" points=\"";
        for (int i = 0; i < nodes; ++i) {
            const double inv_p = static_cast<double>(spec.m) * i / spec.cells;
            const double d = std::clamp(gamma - spec.n * inv_p, spec.delta_lo, spec.delta_hi);
            os << detail::fmt_double(sx(inv_p)) << ',' << detail::fmt_double(sy(d)) << ' ';
        }
        os << "\"/>\n";
        os << "<line x1=\"" << detail::fmt_double(sx(0)) << "\" y1=\"" << detail::fmt_double(sy(1.0))
           << "\" x2=\"" << detail::fmt_double(sx(spec.m)) << "\" y2=\""
           << detail::fmt_double(sy(1.0))
           << "\" stroke=\"#777777\" stroke-dasharray=\"4 3\" stroke-width=\"1\"/>\n";
        const double cip = corner_inv_p(gamma, spec);
        if (cip >= 0.0)
            os << "<circle cx=\"" << detail::fmt_double(sx(cip)) << "\" cy=\""
               << detail::fmt_double(sy(1.0))
               << "\" r=\"4\" fill=\"white\" stroke=\"#205060\" stroke-width=\"1.5\"/>\n";
        os << "<rect x=\"" << detail::fmt_double(x0) << "\" y=\"" << detail::fmt_double(y0)
           << "\" width=\"" << pw << "\" height=\"" << ph
           << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
        os << "<text x=\"" << detail::fmt_double(x0 + pw / 2.0) << "\" y=\""
           << detail::fmt_double(y0 - 10)
           << "\" text-anchor=\"middle\" font-size=\"14\">gamma = " << detail::fmt_double(gamma)
           << "</text>\n";
        os << "<text x=\"" << detail::fmt_double(x0 + pw / 2.0) << "\" y=\""
           << detail::fmt_double(y0 + ph + 28)
           << "\" text-anchor=\"middle\" font-size=\"12\">1/p</text>\n";
        os << "<text x=\"" << detail::fmt_double(x0 - 28) << "\" y=\""
           << detail::fmt_double(y0 + ph / 2.0) << "\" font-size=\"12\">delta</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace fraclip
