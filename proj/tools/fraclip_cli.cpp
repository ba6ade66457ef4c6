// Command-line front end: scenario configs in, certificates/CSV/SVG out.
//
// Exit codes: 0 member/pass, 1 non-member/fail, 2 inconclusive/skipped,
// 3 usage or configuration error.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fraclip/batteries.hpp"
#include "fraclip/io.hpp"

namespace {

using namespace fraclip;

Scenario load_scenario(const std::string& path, const char* expected_task) {
    json j = json::parse(read_file(path));
    Scenario sc = parse_scenario(j);
    if (!sc.task.empty() && sc.task != expected_task)
        throw std::invalid_argument("config task is '" + sc.task + "', expected '" +
                                    expected_task + "'");
    sc.task = expected_task;
    return sc;
}

void apply_grid_flags(Scenario& sc, double decades, int ppd, unsigned threads) {
    if (decades > 0.0) {
        const double half = decades / 2.0;
        sc.grid.rho_lo = sc.grid.r_lo = std::pow(10.0, -half);
        sc.grid.rho_hi = sc.grid.r_hi = std::pow(10.0, half);
    }
    if (ppd > 0) sc.grid.per_decade = ppd;
    if (threads > 0) {
        sc.threads = threads;
        sc.sup.threads = threads;
    }
}

int cmd_membership(const std::string& config, const std::string& out,
                   const std::string& csv, double decades, int ppd, unsigned threads) {
    Scenario sc = load_scenario(config, "membership");
    apply_grid_flags(sc, decades, ppd, threads);
    const Certificate cert =
        certify_membership(sc.pair, sc.params, sc.condition, sc.grid, sc.eval, sc.sup);
    const json report = certificate_json(cert, sc);
    const std::string text = report.dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);

    if (!csv.empty()) {
        std::vector<ConditionValue> rows;
        std::vector<double> rhos;
        if (sc.grid.origin_axis) rhos.push_back(0.0);
        for (double rho : log_axis(sc.grid.rho_lo, sc.grid.rho_hi, sc.grid.per_decade))
            rhos.push_back(rho);
        for (double rho : rhos)
            for (double r : log_axis(sc.grid.r_lo, sc.grid.r_hi, sc.grid.per_decade))
                rows.push_back(condition_value(sc.condition, sc.pair, sc.params,
                                               Ball::radial(rho, r, sc.params.n), sc.eval));
        write_file(csv, condition_rows_csv(rows));
    }
    switch (cert.membership) {
        case Verdict::bounded: return 0;
        case Verdict::unbounded: return 1;
        case Verdict::inconclusive: return 2;
    }
    return 3;
}

int cmd_region_map(int n, int m, std::vector<double> gammas, int cells, double delta_lo,
                   double delta_hi, const std::string& csv, const std::string& svg,
                   bool overlay, unsigned threads) {
    RegionMapSpec spec;
    spec.n = n;
    spec.m = m;
    if (!gammas.empty()) spec.gammas = std::move(gammas);
    spec.cells = cells;
    spec.delta_lo = delta_lo;
    spec.delta_hi = delta_hi;
    write_file(csv, region_csv(spec));
    std::string svg_text = region_svg(spec);
    if (overlay) {
        // Empirical markers: constant-weight sup sweeps at a few panel points.
        std::ostringstream extra;
        GridSpec grid;
        grid.rho_lo = grid.r_lo = 1e-2;
        grid.rho_hi = grid.r_hi = 1e2;
        grid.per_decade = 6;
        SupPolicy sp;
        sp.threads = threads;
        const int pw = 300, ph = 330, margin = 55, gap = 30;
        for (std::size_t g = 0; g < spec.gammas.size(); ++g) {
            const double gamma = spec.gammas[g];
            const double x0 = margin + static_cast<double>(g) * (pw + gap);
            for (double frac : {0.25, 0.5, 0.75}) {
                const double inv_p = frac;  // within the p >= 1 range of one slot
                // constant weights certify exactly on the boundary line
                for (double doff : {0.0, 0.4}) {
                    const double delta = gamma - spec.n * inv_p + doff;
                    if (delta < spec.delta_lo || delta > spec.delta_hi) continue;
                    std::vector<Exponent> pv(static_cast<std::size_t>(spec.m),
                                             Exponent::from_value(spec.m / inv_p));
                    const FracParams prm =
                        FracParams::make(spec.n, spec.m, gamma, delta, pv);
                    WeightPair pair;
                    pair.w = Weight::power(0.0);
                    pair.v.assign(static_cast<std::size_t>(spec.m), Weight::power(0.0));
                    const Certificate cert =
                        certify_membership(pair, prm, ConditionId::hcal, grid, {}, sp);
                    const double px = x0 + inv_p / spec.m * pw;
                    const double py =
                        margin + (spec.delta_hi - delta) / (spec.delta_hi - spec.delta_lo) * ph;
                    if (cert.membership == Verdict::bounded)
                        extra << "<circle cx=\"" << px << "\" cy=\"" << py
                              << "\" r=\"3\" fill=\"none\" stroke=\"#106010\" stroke-width=\"1.5\"/>\n";
                    else
                        extra << "<path d=\"M" << px - 3 << ' ' << py - 3 << " L" << px + 3
                              << ' ' << py + 3 << " M" << px - 3 << ' ' << py + 3 << " L"
                              << px + 3 << ' ' << py - 3
                              << "\" stroke=\"#a01010\" stroke-width=\"1.5\"/>\n";
                }
            }
        }
        const std::string tail = "</svg>\n";
        svg_text.replace(svg_text.rfind(tail), tail.size(), extra.str() + tail);
    }
    write_file(svg, svg_text);
    std::printf("region map: %zu panels, %d x %d nodes -> %s, %s\n", spec.gammas.size(),
                spec.cells + 1, spec.cells + 1, csv.c_str(), svg.c_str());
    return 0;
}

int cmd_lemma_check(const std::string& id, const BatteryConfig& cfg, const std::string& out) {
    const BatteryResult res = run_battery(id, cfg);
    std::ostringstream os;
    os << "check " << res.id << ": "
       << (res.skipped ? "SKIPPED" : (res.pass ? "PASS" : "FAIL")) << "\n";
    if (!res.reason.empty()) os << "  " << res.reason << "\n";
    for (const auto& d : res.detail) os << "  " << d << "\n";
    const std::string text = os.str();
    std::cout << text;
    if (!out.empty()) write_file(out, text);
    if (res.skipped) return 2;
    return res.pass ? 0 : 1;
}

int cmd_operator_eval(const std::string& config, const std::string& csv) {
    Scenario sc = load_scenario(config, "operator-eval");
    if (sc.functions.empty()) throw std::invalid_argument("operator-eval needs functions");
    if (sc.x_values.empty()) sc.x_values = {0.0};
    std::ostringstream os;
    os << "x,I,I_relerr_est,J,a_B,decomp_residual\n";
    double aB = 0.0;
    if (sc.ball) aB = ball_offset(sc.functions, *sc.ball, sc.params, sc.quad);
    for (double x : sc.x_values) {
        const auto [iv, ierr] = eval_I_with_error(sc.functions, Point::d1(x), sc.params, sc.quad);
        const double jv = eval_J(sc.functions, Point::d1(x), sc.params, sc.quad);
        double resid = 0.0;
        if (sc.ball) {
            const double iy = decomposition_I(sc.functions, Point::d1(x), *sc.ball, sc.params,
                                              sc.quad);
            resid = jv - (aB + iy);
        }
        os << detail::fmt_double(x) << ',' << detail::fmt_double(iv) << ','
           << detail::fmt_double(ierr) << ',' << detail::fmt_double(jv) << ','
           << detail::fmt_double(aB) << ',' << detail::fmt_double(resid) << '\n';
    }
    if (csv.empty())
        std::cout << os.str();
    else
        write_file(csv, os.str());
    return 0;
}

int cmd_boundedness(const std::string& config, const std::string& csv,
                    const std::string& out) {
    Scenario sc = load_scenario(config, "boundedness");
    Rng rng(sc.seed);
    for (int i = 0; i < sc.random_functions; ++i)
        sc.functions.push_back(random_poly_bump(rng));
    if (static_cast<int>(sc.functions.size()) != sc.params.m)
        throw std::invalid_argument("boundedness needs m functions (given + random)");
    std::vector<Ball> family;
    for (double r : log_axis(sc.family_r_lo, sc.family_r_hi, sc.family_per_decade))
        family.emplace_back(Point::axis(sc.family_center, sc.params.n), r);
    const OscillationReport rep =
        boundedness_experiment(sc.pair, sc.functions, sc.params, family, sc.quad, sc.variant);
    write_file(csv.empty() ? "oscillation.csv" : csv, oscillation_csv(rep));

    json j;
    j["version"] = kVersion;
    j["kind"] = "oscillation_report";
    j["label"] = rep.label;
    j["norms_product"] = rep.norms_product;
    j["max_quotient"] = rep.max_quotient;
    j["ratio"] = rep.ratio;
    j["small_ball_blowup"] = slope_to_json(rep.small_ball);
    j["resolved_config"] = resolved_config(sc);
    const std::string text = j.dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_file(out, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-weight functionals, sup-search certificates and operator quadrature "
                 "for the multilinear fractional integral"};
    app.require_subcommand(1);

    std::string config, out, csv, svg, battery_id;
    double decades = 0.0;
    int ppd = 0;
    unsigned threads = 0;

    auto* mem = app.add_subcommand("membership", "certify a weight pair against a condition");
    mem->add_option("config", config, "scenario config (JSON)")->required();
    mem->add_option("--out", out, "certificate path (default stdout)");
    mem->add_option("--csv", csv, "also dump per-ball condition rows");
    mem->add_option("--decades", decades, "grid decades per axis (centered at 1)");
    mem->add_option("--points-per-decade", ppd, "grid points per decade");
    mem->add_option("--threads", threads, "worker threads");

    int rm_n = 1, rm_m = 2, rm_cells = 100;
    double rm_dlo = -3.0, rm_dhi = 2.0;
    std::vector<double> rm_gammas;
    std::vector<double> rm_pvec;
    bool rm_overlay = false;
    std::string rm_csv = "region_map.csv", rm_svg = "region_map.svg";
    auto* rm = app.add_subcommand("region-map", "rasterize the admissible-parameter panels");
    rm->add_option("--n", rm_n, "dimension");
    rm->add_option("--m", rm_m, "multilinearity (sets the 1/p axis extent)");
    rm->add_option("--gamma", rm_gammas, "panel gamma values (default 0.5 1 1.5)");
    rm->add_option("--p-vec", rm_pvec, "exponent vector for overlay scenarios (optional)");
    rm->add_option("--cells", rm_cells, "cells per axis (nodes = cells+1)");
    rm->add_option("--delta-lo", rm_dlo, "delta axis low end");
    rm->add_option("--delta-hi", rm_dhi, "delta axis high end");
    rm->add_option("--csv", rm_csv, "classification CSV path");
    rm->add_option("--svg", rm_svg, "figure path");
    rm->add_flag("--overlay", rm_overlay, "overlay empirical sup-sweep verdicts");
    rm->add_option("--threads", threads, "worker threads");

    BatteryConfig bat;
    auto* lc = app.add_subcommand("lemma-check", "run a property battery");
    lc->add_option("--id", battery_id, "battery id: 2.1, 3.2, 5.2 or holder_1.3")->required();
    lc->add_option("--samples", bat.samples, "samples per configuration");
    lc->add_option("--balls", bat.balls, "balls per configuration");
    lc->add_option("--pairs", bat.pairs, "weight pairs (battery 2.1)");
    lc->add_option("--mc-samples", bat.mc_samples, "Monte Carlo draws");
    lc->add_option("--seed", bat.seed, "random seed");
    lc->add_flag("--violate-hypotheses", bat.violate_hypotheses,
                 "use a hypothesis-violating weight (battery 2.1 reports skipped)");
    lc->add_option("--out", out, "also write the report to a file");
    lc->add_option("--threads", bat.threads, "worker threads");

    auto* oe = app.add_subcommand("operator-eval", "evaluate I, J and a_B on a point grid");
    oe->add_option("config", config, "scenario config (JSON)")->required();
    oe->add_option("--csv", csv, "output CSV path (default stdout)");

    auto* bd = app.add_subcommand("boundedness", "oscillation-quotient experiment");
    bd->add_option("config", config, "scenario config (JSON)")->required();
    bd->add_option("--csv", csv, "oscillation CSV path (default oscillation.csv)");
    bd->add_option("--out", out, "report path (default stdout)");

    try {
        app.parse(argc, argv);
        if (mem->parsed()) return cmd_membership(config, out, csv, decades, ppd, threads);
        if (rm->parsed())
            return cmd_region_map(rm_n, rm_m, rm_gammas, rm_cells, rm_dlo, rm_dhi, rm_csv,
                                  rm_svg, rm_overlay, threads == 0 ? 1 : threads);
        if (lc->parsed()) return cmd_lemma_check(battery_id, bat, out);
        if (oe->parsed()) return cmd_operator_eval(config, csv);
        if (bd->parsed()) return cmd_boundedness(config, csv, out);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 3;
}
