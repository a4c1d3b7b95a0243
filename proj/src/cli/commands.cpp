#include "qgas/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <numbers>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgas/analytic.hpp"
#include "qgas/cli/output.hpp"
#include "qgas/errors.hpp"
#include "qgas/fock.hpp"

namespace qgas::cli {

namespace {

using nlohmann::ordered_json;

ordered_json meta_base(const RunConfig& cfg, const std::string& command,
                       const std::string& method) {
    ordered_json meta;
    meta["schema"] = 1;
    meta["command"] = command;
    meta["system"] = {{"eps", cfg.eps}, {"N", cfg.particles}, {"q", cfg.q},
                      {"hbar", cfg.hbar}};
    meta["method"] = method;
    meta["counts"] = ordered_json::object();
    meta["warnings"] = ordered_json::array();
    meta["seed"] = cfg.seed;
    return meta;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

void write_meta(const RunConfig& cfg, const std::string& stem, const ordered_json& meta) {
    write_file_atomic(out_path(cfg, stem + ".json"), meta.dump(2) + "\n");
}

ordered_json zero_rows_json(const std::vector<ZeroRow>& rows) {
    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) {
        arr.push_back({{"re", row.re},
                       {"im", row.im},
                       {"abs", row.abs},
                       {"residual", row.residual},
                       {"kind", row.kind}});
    }
    return arr;
}

// ----------------------------------------------------------------- zeros-poly

struct KindOutcome {
    std::vector<ZeroRow> rows;
    double origin_multiplicity = 0;
    int iterations = 0;
    int rational_denominator = 1;
    std::string method = "aberth";
    bool converged = true;
    std::vector<std::string> warnings;
};

void append_zero_rows(KindOutcome& outcome, const zeros::ZeroSet& set,
                      const std::string& kind) {
    for (std::size_t i = 0; i < set.zeros.size(); ++i) {
        outcome.rows.push_back(ZeroRow{set.zeros[i].real(), set.zeros[i].imag(),
                                       std::abs(set.zeros[i]), set.residuals[i], kind});
    }
    outcome.origin_multiplicity = set.meta.origin_multiplicity;
    outcome.iterations = set.meta.iterations;
    outcome.rational_denominator = set.meta.rational_denominator;
    for (const auto& w : set.meta.warnings) {
        outcome.warnings.push_back(w);
    }
}

// z-plane zeros through the beta-plane search, used when the powers cannot be
// rescaled to integers: scan one principal-branch window beta1 in (-pi, pi]
// per unit eps1 and map each zero through z = e^{-bt*eps1}.
KindOutcome solve_via_beta_plane(const RunConfig& cfg, const zeros::SparsePolynomial& poly,
                                 bool weighted, const std::string& kind) {
    const SystemSpec sys = cfg.system();
    const double eps1 = cfg.eps[0];

    // Radius bound: |z| of any root is below R with |c_top| R^(p_top) equal to
    // the sum of the other term magnitudes at R.
    double coeff_sum = 0.0;
    for (const auto& t : poly.terms) {
        coeff_sum += std::abs(t.coeff);
    }
    const auto& top = poly.terms.back();
    double gap = top.power;
    if (poly.terms.size() >= 2) {
        gap = top.power - poly.terms[poly.terms.size() - 2].power;
    }
    const double radius =
        1.5 * std::max(1.0, std::pow(coeff_sum / std::abs(top.coeff), 1.0 / gap));
    const double beta_span = 1.2 * std::log(radius) / std::abs(eps1);
    if (!std::isfinite(beta_span) || beta_span <= 0.0) {
        throw ConfigError("cannot bound the root annulus for this power set");
    }

    const zeros::Rect region{-beta_span, beta_span, -std::numbers::pi / std::abs(eps1),
                             std::numbers::pi / std::abs(eps1)};
    const zeros::ZeroSet set =
        zeros::zeros_beta_plane(sys, weighted ? zeros::BetaTarget::zc
                                              : zeros::BetaTarget::partition,
                                region, cfg.grid_m, cfg.grid_k, cfg.threads);

    KindOutcome outcome;
    outcome.method = "grid_newton";
    outcome.origin_multiplicity = 0;
    outcome.iterations = 0;
    for (std::size_t i = 0; i < set.zeros.size(); ++i) {
        const std::complex<double> z =
            qgas::detail::cexp(-static_cast<long double>(set.zeros[i].real()) * eps1,
                               -static_cast<long double>(set.zeros[i].imag()) * eps1);
        outcome.rows.push_back(
            ZeroRow{z.real(), z.imag(), std::abs(z), set.residuals[i], kind});
    }
    for (const auto& w : set.meta.warnings) {
        outcome.warnings.push_back(w);
    }
    return outcome;
}

KindOutcome solve_kind(const RunConfig& cfg, bool weighted, const std::string& kind) {
    zeros::SparsePolynomial poly;
    try {
        poly = zeros::build_z_polynomial(cfg.particles, DeformationParam(cfg.q),
                                         cfg.eps_ratio(), weighted);
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    }
    try {
        KindOutcome outcome;
        append_zero_rows(outcome, zeros::solve_z_polynomial(poly), kind);
        return outcome;
    } catch (const zeros::ConvergenceError& e) {
        KindOutcome outcome;
        append_zero_rows(outcome, e.partial, kind);
        outcome.converged = false;
        outcome.warnings.push_back(std::string("convergence failure: ") + e.what());
        return outcome;
    } catch (const std::domain_error&) {
        // degenerate (degree 0) polynomials are a configuration problem;
        // non-rationalizable powers and over-cap degrees go through the
        // beta-plane.
        if (poly.terms.size() < 2) {
            throw ConfigError("polynomial is degenerate (single term); no zeros to find");
        }
        try {
            return solve_via_beta_plane(cfg, poly, weighted, kind);
        } catch (const OverflowError&) {
            throw ConfigError(
                "root annulus exceeds the double-precision exp range; reduce N or q");
        }
    }
}

void unit_circle_stats(const std::vector<ZeroRow>& rows, const std::string& kind,
                       ordered_json& meta) {
    double max_dev = 0.0, sum_dev = 0.0;
    int count = 0;
    for (const auto& row : rows) {
        if (row.kind != kind) {
            continue;
        }
        const double dev = std::abs(row.abs - 1.0);
        max_dev = std::max(max_dev, dev);
        sum_dev += dev;
        ++count;
    }
    if (count > 0) {
        meta["unit_circle"][kind] = {{"max_abs_dev", max_dev},
                                     {"mean_abs_dev", sum_dev / count}};
    }
}

int write_zeros_poly_outputs(const RunConfig& cfg, const std::string& stem,
                             const std::vector<KindOutcome>& outcomes,
                             const std::vector<std::string>& kinds) {
    std::vector<ZeroRow> rows;
    bool converged = true;
    const std::string command = stem.rfind("figure1", 0) == 0 ? "figure1" : "zeros-poly";
    ordered_json meta = meta_base(cfg, command,
                                  outcomes.empty() ? "aberth" : outcomes.front().method);
    meta["system"]["eps_ratio"] =
        cfg.eps.size() == 2 && cfg.eps[0] != 0.0 ? cfg.eps[1] / cfg.eps[0] : 0.0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        const auto& outcome = outcomes[i];
        rows.insert(rows.end(), outcome.rows.begin(), outcome.rows.end());
        meta["counts"][kinds[i]] = outcome.rows.size();
        meta["origin_multiplicity"][kinds[i]] = outcome.origin_multiplicity;
        meta["iterations"][kinds[i]] = outcome.iterations;
        if (outcome.rational_denominator != 1) {
            meta["rational_denominator"][kinds[i]] = outcome.rational_denominator;
        }
        for (const auto& w : outcome.warnings) {
            meta["warnings"].push_back(w);
        }
        converged = converged && outcome.converged;
    }
    std::stable_sort(rows.begin(), rows.end(), [](const ZeroRow& a, const ZeroRow& b) {
        if (a.kind != b.kind) {
            return a.kind < b.kind; // correlation before fisher, alphabetical
        }
        if (a.re != b.re) {
            return a.re < b.re;
        }
        return a.im < b.im;
    });
    unit_circle_stats(rows, "fisher", meta);
    unit_circle_stats(rows, "correlation", meta);
    meta["converged"] = converged;

    if (cfg.format == "json") {
        meta["rows"] = zero_rows_json(rows);
        write_meta(cfg, stem, meta);
    } else {
        write_file_atomic(out_path(cfg, stem + ".csv"), zeros_poly_csv(rows));
        write_meta(cfg, stem, meta);
    }
    if (cfg.svg) {
        write_file_atomic(out_path(cfg, stem + ".svg"), zeros_poly_svg(rows));
    }
    return converged ? kExitOk : kExitConvergenceFailure;
}

int zeros_poly_impl(const RunConfig& cfg, const std::string& stem) {
    std::vector<KindOutcome> outcomes;
    std::vector<std::string> kinds;
    if (cfg.poly_fisher) {
        outcomes.push_back(solve_kind(cfg, false, "fisher"));
        kinds.push_back("fisher");
    }
    if (cfg.poly_correlation) {
        outcomes.push_back(solve_kind(cfg, true, "correlation"));
        kinds.push_back("correlation");
    }
    if (outcomes.empty()) {
        throw ConfigError("zeros-poly: no kinds requested");
    }
    return write_zeros_poly_outputs(cfg, stem, outcomes, kinds);
}

// ----------------------------------------------------------------- zeros-beta

zeros::Rect default_beta_region(const RunConfig& cfg) {
    const SystemSpec sys = cfg.system();
    const auto period = zeros::beta1_period(sys, cfg.beta_target);
    const double beta1_max = period.value_or(10.0);
    return zeros::Rect{-0.5, 0.5, 0.0, beta1_max};
}

int zeros_beta_impl(const RunConfig& cfg) {
    const SystemSpec sys = cfg.system();
    const zeros::Rect region = cfg.region ? *cfg.region : default_beta_region(cfg);

    zeros::ZeroSet set;
    try {
        set = zeros::zeros_beta_plane(sys, cfg.beta_target, region, cfg.grid_m,
                                      cfg.grid_k, cfg.threads);
    } catch (const std::domain_error& e) {
        throw ConfigError(e.what());
    } catch (const OverflowError& e) {
        throw ConfigError(e.what());
    }

    std::vector<BetaRow> rows;
    rows.reserve(set.zeros.size());
    for (std::size_t i = 0; i < set.zeros.size(); ++i) {
        rows.push_back(BetaRow{set.zeros[i].real(), set.zeros[i].imag(),
                               set.residuals[i]});
    }

    ordered_json meta = meta_base(cfg, "zeros-beta", "grid_newton");
    meta["target"] = cfg.beta_target == zeros::BetaTarget::zc ? "zc" : "partition";
    meta["region"] = {{"beta_min", region.beta_min},
                      {"beta_max", region.beta_max},
                      {"beta1_min", region.beta1_min},
                      {"beta1_max", region.beta1_max}};
    meta["grid"] = {{"m", cfg.grid_m}, {"k", cfg.grid_k}};
    meta["counts"]["zeros"] = rows.size();
    meta["counts"]["flagged_cells"] = set.meta.flagged_cells;
    meta["counts"]["newton_diverged"] = set.meta.diverged_cells;
    if (set.meta.beta1_period) {
        meta["beta1_period"] = *set.meta.beta1_period;
    }
    for (const auto& w : set.meta.warnings) {
        meta["warnings"].push_back(w);
    }
    if (cfg.q == 1.0 && rows.empty()) {
        meta["warnings"].push_back("no zeros at q=1");
    }

    if (cfg.format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& row : rows) {
            arr.push_back({{"beta", row.beta},
                           {"beta1", row.beta1},
                           {"residual", row.residual}});
        }
        meta["rows"] = arr;
        write_meta(cfg, "zeros_beta", meta);
    } else {
        write_file_atomic(out_path(cfg, "zeros_beta.csv"), zeros_beta_csv(rows));
        write_meta(cfg, "zeros_beta", meta);
    }
    if (cfg.svg) {
        write_file_atomic(out_path(cfg, "zeros_beta.svg"), zeros_beta_svg(rows));
    }
    return kExitOk;
}

// ----------------------------------------------------------------- correlator

int correlator_impl(const RunConfig& cfg) {
    const SystemSpec sys = cfg.system();
    if (!(cfg.corr_beta > 0.0)) {
        throw ConfigError("correlator.beta must be > 0");
    }
    if (cfg.tau_points < 2 || !(cfg.tau_max > cfg.tau_min)) {
        throw ConfigError("correlator needs tau_max > tau_min and tau_points >= 2");
    }

    const auto evaluate = [&](double tau) {
        return correlator(sys, cfg.corr_beta, tau, 0.0).value;
    };

    std::vector<TauRow> rows;
    rows.reserve(static_cast<std::size_t>(cfg.tau_points));
    const double step = (cfg.tau_max - cfg.tau_min) / (cfg.tau_points - 1);
    double max_abs = 0.0;
    for (int i = 0; i < cfg.tau_points; ++i) {
        const double tau = cfg.tau_min + i * step;
        const std::complex<double> value = evaluate(tau);
        rows.push_back(TauRow{tau, value.real(), value.imag(), std::abs(value)});
        max_abs = std::max(max_abs, std::abs(value));
    }

    // Golden-section refinement of every strict local minimum of |C|;
    // refined minima below threshold * max|C| are reported as zero candidates.
    ordered_json candidates = ordered_json::array();
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int i = 1; i + 1 < cfg.tau_points; ++i) {
        if (!(rows[i].abs < rows[i - 1].abs && rows[i].abs < rows[i + 1].abs)) {
            continue;
        }
        double lo = rows[i - 1].tau;
        double hi = rows[i + 1].tau;
        double x1 = hi - inv_phi * (hi - lo);
        double x2 = lo + inv_phi * (hi - lo);
        double f1 = std::abs(evaluate(x1));
        double f2 = std::abs(evaluate(x2));
        for (int iter = 0; iter < 90; ++iter) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = std::abs(evaluate(x1));
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = std::abs(evaluate(x2));
            }
        }
        const double tau_star = 0.5 * (lo + hi);
        const double abs_star = std::abs(evaluate(tau_star));
        if (abs_star <= cfg.zero_threshold * max_abs) {
            candidates.push_back({{"tau", tau_star}, {"abs", abs_star}});
        }
    }

    ordered_json meta = meta_base(cfg, "correlator", "tau-sweep");
    meta["beta"] = cfg.corr_beta;
    meta["tau_grid"] = {{"min", cfg.tau_min}, {"max", cfg.tau_max},
                        {"points", cfg.tau_points}};
    meta["counts"]["rows"] = rows.size();
    meta["counts"]["zero_candidates"] = candidates.size();
    meta["zero_threshold"] = cfg.zero_threshold;
    meta["zero_candidates"] = candidates;

    if (cfg.format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& row : rows) {
            arr.push_back({{"tau", row.tau}, {"re", row.re}, {"im", row.im},
                           {"abs", row.abs}});
        }
        meta["rows"] = arr;
        write_meta(cfg, "correlator", meta);
    } else {
        write_file_atomic(out_path(cfg, "correlator.csv"), correlator_csv(rows));
        write_meta(cfg, "correlator", meta);
    }
    return kExitOk;
}

// --------------------------------------------------------------- oracle-check

struct OracleCheck {
    std::string name;
    double residual;
    double bound;
};

int oracle_check_impl(const RunConfig& cfg) {
    std::vector<OracleCheck> checks;
    std::mt19937_64 rng(cfg.seed);

    // q-commutator relation on truncated reps.
    {
        bool corrupted = false;
        for (double qv : {0.5, 1.0, 2.0}) {
            for (int dim : {2, 4, 6, 8}) {
                fock::FockRep rep = fock::build_rep(dim, DeformationParam(qv));
                if (cfg.oracle_corrupt && !corrupted && dim >= 3) {
                    // negative control: evaluate the relation at a wrong q.
                    // dim >= 3 so the restricted block actually depends on q.
                    rep.q = DeformationParam(qv * 1.05);
                    corrupted = true;
                }
                checks.push_back({"qcommutator q=" + std::to_string(qv) +
                                      " dim=" + std::to_string(dim),
                                  fock::qcommutator_residual(rep), 1e-13});
            }
        }
    }

    // shift identity a f(a+ a) = f(q a+ a + 1) a with f = square.
    for (double qv : {0.5, 1.0, 2.0}) {
        for (int dim : {4, 8, 16}) {
            const fock::FockRep rep = fock::build_rep(dim, DeformationParam(qv));
            checks.push_back({"shift_identity q=" + std::to_string(qv) +
                                  " dim=" + std::to_string(dim),
                              fock::shift_identity_residual(rep), 1e-12});
        }
    }

    // Heisenberg closed form against direct conjugation.
    {
        std::uniform_int_distribution<int> dim_dist(2, 16);
        std::uniform_real_distribution<double> q_dist(0.5, 1.6);
        std::uniform_real_distribution<double> eps_dist(0.3, 1.5);
        std::uniform_real_distribution<double> phase_dist(-20.0, 20.0);
        for (int i = 0; i < 20; ++i) {
            const int dim = dim_dist(rng);
            const double qv = q_dist(rng);
            const double eps_j = eps_dist(rng);
            const double t = phase_dist(rng) / eps_j;
            const fock::FockRep rep = fock::build_rep(dim, DeformationParam(qv));
            checks.push_back({"heisenberg sample " + std::to_string(i),
                              fock::heisenberg_residual(rep, eps_j, t, 1.0), 1e-12});
            if (i < 5) {
                checks.push_back({"unitarity sample " + std::to_string(i),
                                  fock::propagator_unitarity_residual(rep, eps_j, t, 1.0),
                                  1e-14});
            }
        }
        const fock::FockRep rep = fock::build_rep(8, DeformationParam(2.0));
        checks.push_back({"heisenberg t=0", fock::heisenberg_residual(rep, 1.3, 0.0, 1.0),
                          0.0});
        checks.push_back({"heisenberg q=2 dim=8",
                          fock::heisenberg_residual(rep, 1.3, 0.7, 1.0), 1e-12});
    }

    // Brute-force trace against the ensemble reduction.
    {
        std::uniform_real_distribution<double> beta_dist(0.2, 1.2);
        std::uniform_real_distribution<double> tau_dist(-3.0, 3.0);
        std::uniform_real_distribution<double> eps_dist(0.2, 1.5);
        for (double qv : {0.5, 1.0, 2.0}) {
            for (int s = 1; s <= 3; ++s) {
                for (int n = 1; n <= 4; ++n) {
                    double worst = 0.0;
                    for (int sample = 0; sample < cfg.oracle_samples; ++sample) {
                        std::vector<double> eps(static_cast<std::size_t>(s));
                        for (auto& e : eps) {
                            e = eps_dist(rng);
                        }
                        const SystemSpec sys(eps, n, DeformationParam(qv), 1.0);
                        const double beta = beta_dist(rng);
                        const double tau = tau_dist(rng);
                        const std::complex<double> a =
                            correlator(sys, beta, tau, 0.0).value;
                        const std::complex<double> b =
                            fock::brute_correlator(sys, beta, tau, 0.0);
                        const double scale = std::max(
                            {std::abs(a), std::abs(b), 1e-300});
                        worst = std::max(worst, std::abs(a - b) / scale);
                    }
                    checks.push_back({"brute_vs_ensemble q=" + std::to_string(qv) +
                                          " s=" + std::to_string(s) +
                                          " N=" + std::to_string(n),
                                      worst, 1e-10});
                }
            }
        }
    }

    // Derivative identity, 20 random two-level parameter sets.
    {
        std::uniform_int_distribution<int> n_dist(2, 5);
        std::uniform_real_distribution<double> q_dist(0.7, 2.0);
        std::uniform_real_distribution<double> eps1_dist(0.5, 1.0);
        std::uniform_real_distribution<double> eps2_dist(0.0, 0.5);
        std::uniform_real_distribution<double> beta_dist(0.3, 0.7);
        std::uniform_real_distribution<double> beta1_dist(-0.2, 0.2);
        for (int i = 0; i < 20; ++i) {
            const SystemSpec sys({eps1_dist(rng), eps2_dist(rng)}, n_dist(rng),
                                 DeformationParam(q_dist(rng)), 1.0);
            const ComplexTemperature bt(beta_dist(rng), beta1_dist(rng));
            checks.push_back({"derivative_identity sample " + std::to_string(i),
                              derivative_identity_residual(sys, bt, 1e-4), 1e-6});
        }
    }

    ordered_json meta = meta_base(cfg, "oracle-check", "oracle-check");
    ordered_json check_list = ordered_json::array();
    int failures = 0;
    for (const auto& check : checks) {
        const bool pass = check.residual <= check.bound;
        if (!pass) {
            ++failures;
        }
        check_list.push_back({{"name", check.name},
                              {"residual", check.residual},
                              {"bound", check.bound},
                              {"pass", pass}});
    }
    meta["counts"]["checks"] = checks.size();
    meta["counts"]["failed"] = failures;
    meta["checks"] = check_list;
    if (cfg.oracle_corrupt) {
        meta["warnings"].push_back("corrupt mode: one sub-check deliberately skewed");
    }
    write_meta(cfg, "oracle_check", meta);

    std::printf("oracle-check: %zu checks, %d failed\n", checks.size(), failures);
    return failures == 0 ? kExitOk : kExitOracleFailure;
}

} // namespace

int cmd_zeros_poly(const RunConfig& cfg) { return zeros_poly_impl(cfg, "zeros_poly"); }

int cmd_zeros_beta(const RunConfig& cfg) { return zeros_beta_impl(cfg); }

int cmd_correlator(const RunConfig& cfg) { return correlator_impl(cfg); }

int cmd_oracle_check(const RunConfig& cfg) { return oracle_check_impl(cfg); }

int cmd_figure1(const RunConfig& cfg) {
    // figure1 preset: q = 2, eps = (1, 0); panel a is N = 5, panel b is N = 7.
    RunConfig panel = cfg;
    panel.eps = {1.0, 0.0};
    panel.q = 2.0;
    panel.hbar = 1.0;
    panel.poly_fisher = true;
    panel.poly_correlation = true;

    panel.particles = 5;
    const int rc_a = zeros_poly_impl(panel, "figure1a");
    panel.particles = 7;
    const int rc_b = zeros_poly_impl(panel, "figure1b");
    return std::max(rc_a, rc_b);
}

namespace {

void add_common_options(CLI::App* sub, RunConfig& cfg, std::string& config_path) {
    sub->add_option("--config", config_path, "JSON config file");
    sub->add_option("--out", cfg.out_dir, "output directory");
    sub->add_option("--format", cfg.format, "data format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--svg", cfg.svg, "also write an SVG scatter");
    sub->add_option("--seed", cfg.seed, "seed for randomized suites");
    sub->add_option("--threads", cfg.threads, "worker threads for grid scans");
}

void add_system_options(CLI::App* sub, RunConfig& cfg) {
    sub->add_option("--N", cfg.particles, "particle number");
    sub->add_option("--q", cfg.q, "deformation parameter");
    sub->add_option("--eps", cfg.eps, "level energies")->expected(1, 16);
    sub->add_option("--hbar", cfg.hbar, "Planck constant");
}

} // namespace

namespace {

bool flag_set(const CLI::App* sub, const std::string& name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

} // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"q-deformed Bose gas: correlators, Fisher zeros, correlation zeros"};
    app.require_subcommand(1);

    RunConfig flags; // parse target; exactly one subcommand runs
    std::string config_path;
    std::string beta_target_flag;
    bool fisher_only = false, correlation_only = false;

    CLI::App* sub_poly = app.add_subcommand("zeros-poly", "z-plane polynomial zeros");
    add_common_options(sub_poly, flags, config_path);
    add_system_options(sub_poly, flags);
    sub_poly->add_flag("--fisher-only", fisher_only, "only the partition polynomial");
    sub_poly->add_flag("--correlation-only", correlation_only,
                       "only the weighted polynomial");

    CLI::App* sub_beta = app.add_subcommand("zeros-beta", "beta-plane zero search");
    add_common_options(sub_beta, flags, config_path);
    add_system_options(sub_beta, flags);
    sub_beta->add_option("--target", beta_target_flag, "partition or zc")
        ->check(CLI::IsMember({"partition", "zc"}));

    CLI::App* sub_corr = app.add_subcommand("correlator", "correlator tau sweep");
    add_common_options(sub_corr, flags, config_path);
    add_system_options(sub_corr, flags);
    sub_corr->add_option("--beta", flags.corr_beta, "inverse temperature");

    CLI::App* sub_oracle = app.add_subcommand("oracle-check", "run the oracle suites");
    add_common_options(sub_oracle, flags, config_path);
    sub_oracle->add_flag("--corrupt", flags.oracle_corrupt,
                         "negative control: skew one sub-check");

    CLI::App* sub_fig1 = app.add_subcommand("figure1", "two-panel zero scatter (N=5 and N=7, q=2)");
    add_common_options(sub_fig1, flags, config_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfigError;
    }

    CLI::App* active = app.get_subcommands().front();
    try {
        RunConfig cfg;
        if (!config_path.empty()) {
            apply_config_file(config_path, cfg);
        }
        // common flags are not settable from the config file
        cfg.out_dir = flags.out_dir;
        cfg.format = flags.format;
        cfg.svg = flags.svg;
        cfg.seed = flags.seed;
        cfg.threads = flags.threads;
        cfg.oracle_corrupt = flags.oracle_corrupt;
        // explicit flags override the config file
        if (flag_set(active, "--N")) {
            cfg.particles = flags.particles;
        }
        if (flag_set(active, "--q")) {
            cfg.q = flags.q;
        }
        if (flag_set(active, "--eps")) {
            cfg.eps = flags.eps;
        }
        if (flag_set(active, "--hbar")) {
            cfg.hbar = flags.hbar;
        }
        if (flag_set(active, "--beta")) {
            cfg.corr_beta = flags.corr_beta;
        }
        if (!beta_target_flag.empty()) {
            cfg.beta_target = beta_target_flag == "zc" ? zeros::BetaTarget::zc
                                                       : zeros::BetaTarget::partition;
        }

        if (active == sub_poly) {
            if (fisher_only && correlation_only) {
                throw ConfigError(
                    "choose at most one of --fisher-only/--correlation-only");
            }
            if (fisher_only) {
                cfg.poly_fisher = true;
                cfg.poly_correlation = false;
            } else if (correlation_only) {
                cfg.poly_fisher = false;
                cfg.poly_correlation = true;
            }
            return cmd_zeros_poly(cfg);
        }
        if (active == sub_beta) {
            return cmd_zeros_beta(cfg);
        }
        if (active == sub_corr) {
            return cmd_correlator(cfg);
        }
        if (active == sub_oracle) {
            return cmd_oracle_check(cfg);
        }
        if (active == sub_fig1) {
            return cmd_figure1(cfg);
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfigError;
    } catch (const zeros::ConvergenceError& e) {
        std::fprintf(stderr, "convergence failure: %s\n", e.what());
        return kExitConvergenceFailure;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitOracleFailure;
    }
    return kExitConfigError;
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("qgas");
    for (const auto& arg : args) {
        argv.push_back(arg.c_str());
    }
    return run(static_cast<int>(argv.size()), argv.data());
}

} // namespace qgas::cli
