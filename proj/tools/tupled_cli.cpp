// tupled: command-line front end for star operations, hypothesis checks,
// Picard solves and finite enumeration.
//
// Exit codes: 0 ok, 2 hypothesis failure, 3 no convergence, 64 usage,
// 65 parse, 66 missing file, 69 enumeration bound, 70 missing g inverse.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "tupled/config.hpp"
#include "tupled/tupled.hpp"

namespace {

using tupled::json;
namespace cfg = tupled::config;

constexpr int schema_version = 1;

enum Exit : int {
    ok = 0,
    hypothesis_failure = 2,
    no_convergence = 3,
    usage = 64,
    parse = 65,
    missing_file = 66,
    bound = 69,
    missing_oracle = 70,
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string config;
    std::string report;
    bool no_timings = false;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> samples;
    unsigned jobs = 1;
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::optional<std::size_t> bound;
    bool force = false;
};

class Timer {
  public:
    void mark(std::string const& name) {
        auto now = std::chrono::steady_clock::now();
        laps_[name] = std::chrono::duration<double, std::milli>(now - last_).count();
        last_ = now;
    }
    json to_json() const {
        json j = json::object();
        for (auto const& [k, v] : laps_)
            j[k] = v;
        return j;
    }

  private:
    std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
    std::map<std::string, double> laps_;
};

cfg::RunConfig load_config(Options const& o) {
    auto c = cfg::load(o.config);
    if (o.seed)
        c.sampler.seed = *o.seed;
    if (o.samples)
        c.sampler.samples = *o.samples;
    if (o.tol)
        c.solve.tol = *o.tol;
    if (o.max_iter)
        c.solve.max_iter = *o.max_iter;
    if (o.bound)
        c.enumeration_bound = *o.bound;
    try {
        c.solve.validate();
    } catch (std::invalid_argument const& e) {
        throw UsageError(e.what());
    }
    c.sampler.jobs = o.jobs;
    return c;
}

void write_report(Options const& o, json report, Timer const& timer) {
    if (!o.no_timings)
        report["timings_ms"] = timer.to_json();
    if (o.report.empty())
        return;
    std::ofstream out(o.report, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write report " + o.report);
    out << report.dump(2) << '\n';
}

json base_report(std::string const& command, cfg::RunConfig const& c) {
    json r;
    r["schema_version"] = schema_version;
    r["command"] = command;
    r["config"] = cfg::echo(c);
    return r;
}

void print_verdicts(std::vector<tupled::HypothesisReport> const& reps) {
    for (auto const& h : reps) {
        std::cout << "  " << h.hypothesis << ": " << tupled::to_string(h.verdict);
        if (h.samples)
            std::cout << " (" << h.samples << " samples)";
        if (!h.note.empty())
            std::cout << " [" << h.note << "]";
        std::cout << '\n';
        if (h.fails())
            std::cout << "    witness: " << h.witness.dump() << '\n';
    }
}

/// Hypotheses of the existence theorems plus diagnostics that do not decide
/// the exit code.
struct CheckResult {
    std::vector<tupled::HypothesisReport> hypotheses;
    std::vector<tupled::HypothesisReport> diagnostics;
    json flags;
    json implied;
    std::vector<std::string> warnings;

    bool any_fails() const {
        return std::any_of(hypotheses.begin(), hypotheses.end(), [](auto const& h) { return h.fails(); });
    }
};

json implied_json(std::optional<tupled::Contraction> const& c, bool permuted, int n) {
    json arr = json::array();
    if (!c)
        return arr;
    for (auto const& x : tupled::implied_conditions(*c, permuted, n))
        arr.push_back(x.describe());
    return arr;
}

CheckResult run_checks(cfg::RunConfig const& c, cfg::VectorBundle const& b) {
    CheckResult r;
    auto const& maps = b.problem.maps;
    auto phi = cfg::make_phi(c);
    if (phi)
        r.hypotheses.push_back(tupled::check_phi(*phi));
    r.hypotheses.push_back(tupled::check_g_inverse(b.space, maps, b.problem.g_inverse, c.sampler));
    r.hypotheses.push_back(tupled::check_monotone_sampled(b.space, maps, c.sampler));
    r.hypotheses.push_back(tupled::check_commuting(b.space, maps, c.sampler));
    r.hypotheses.push_back(tupled::check_initial_condition(b.space, maps, b.problem.u0, c.direction));
    auto contraction = cfg::make_contraction(c);
    if (contraction)
        r.hypotheses.push_back(tupled::check_contraction(b.space, maps, *contraction, c.sampler));
    auto g_inc = tupled::check_g_increasing(b.space, maps, c.sampler);
    r.diagnostics.push_back(g_inc);
    auto flags = tupled::declare_topological_flags("vector", maps.g_is_identity(), c.flags, !g_inc.fails());
    r.hypotheses.push_back(flags.report());
    r.flags = flags.to_json();
    r.warnings = flags.warnings;
    r.implied = implied_json(contraction, tupled::is_permuted(b.star), b.star.n());
    return r;
}

CheckResult run_checks(cfg::RunConfig const& c, cfg::FiniteBundle const& b) {
    CheckResult r;
    auto const& maps = b.problem.maps;
    auto phi = cfg::make_phi(c);
    if (phi)
        r.hypotheses.push_back(tupled::check_phi(*phi));
    r.hypotheses.push_back(tupled::check_range_inclusion(b.finite));
    r.hypotheses.push_back(tupled::check_monotone_property(b.finite, c.pair_bound));
    r.hypotheses.push_back(tupled::check_commuting(b.finite));
    r.hypotheses.push_back(tupled::check_initial_condition(b.problem.space, maps, b.problem.u0, c.direction));
    auto contraction = cfg::make_contraction(c);
    if (contraction)
        r.hypotheses.push_back(tupled::check_contraction(b.finite, b.star, *contraction, c.pair_bound));
    r.diagnostics.push_back(tupled::check_argumentwise_monotone(b.finite, c.pair_bound));
    auto flags = tupled::declare_topological_flags("finite", b.g_identity, c.flags);
    r.hypotheses.push_back(flags.report());
    r.flags = flags.to_json();
    r.warnings = flags.warnings;
    r.implied = implied_json(contraction, tupled::is_permuted(b.star), b.star.n());
    return r;
}

void add_checks(json& report, CheckResult const& r) {
    json h = json::array();
    for (auto const& x : r.hypotheses)
        h.push_back(tupled::to_json(x));
    report["hypotheses"] = std::move(h);
    json d = json::array();
    for (auto const& x : r.diagnostics)
        d.push_back(tupled::to_json(x));
    report["diagnostics"] = std::move(d);
    report["flags"] = r.flags;
    report["implied_conditions"] = r.implied;
    report["warnings"] = r.warnings;
}

void print_checks(CheckResult const& r) {
    std::cout << "hypotheses:\n";
    print_verdicts(r.hypotheses);
    std::cout << "diagnostics:\n";
    print_verdicts(r.diagnostics);
    for (auto const& w : r.warnings)
        std::cerr << "warning: " << w << '\n';
    for (auto const& h : r.hypotheses)
        if (h.verdict == tupled::Verdict::unknown && h.hypothesis != "topological_flags")
            std::cerr << "warning: " << h.hypothesis << " sampled only, no counterexample found\n";
}

template <class Fn>
auto with_problem(cfg::RunConfig const& c, Fn&& fn) {
    if (c.finite())
        return fn(cfg::make_finite_problem(c));
    return fn(cfg::make_vector_problem(c));
}

int cmd_check(Options const& o) {
    Timer timer;
    auto c = load_config(o);
    timer.mark("load");
    return with_problem(c, [&](auto const& bundle) {
        auto r = run_checks(c, bundle);
        timer.mark("checks");
        json report = base_report("check", c);
        add_checks(report, r);
        int code = r.any_fails() ? hypothesis_failure : ok;
        report["exit_code"] = code;
        print_checks(r);
        write_report(o, std::move(report), timer);
        return code;
    });
}

template <class P>
int solve_exit_code(tupled::SolveReport<P> const& s) {
    switch (s.status) {
    case tupled::SolveStatus::converged: return ok;
    case tupled::SolveStatus::max_iter:
    case tupled::SolveStatus::diverged: return no_convergence;
    case tupled::SolveStatus::hypothesis_failure: return hypothesis_failure;
    case tupled::SolveStatus::g_inverse_missing: return missing_oracle;
    }
    return no_convergence;
}

template <class Bundle>
auto probe(cfg::RunConfig const& c, Bundle const& b) {
    if constexpr (std::is_same_v<Bundle, cfg::VectorBundle>)
        return tupled::uniqueness_probe(b.problem, c.solve, c.trials, c.sampler.seed, c.sampler.box, c.sampler.jobs);
    else
        return tupled::uniqueness_probe(b.problem, c.solve, c.trials, c.sampler.seed, c.sampler.jobs);
}

int cmd_solve(Options const& o) {
    Timer timer;
    auto c = load_config(o);
    timer.mark("load");
    return with_problem(c, [&](auto const& bundle) {
        using P = typename std::decay_t<decltype(bundle.problem)>::Point;
        auto r = run_checks(c, bundle);
        timer.mark("checks");
        json report = base_report("solve", c);
        add_checks(report, r);
        print_checks(r);
        tupled::SolveReport<P> s;
        bool const failed = r.any_fails();
        if (failed && !o.force) {
            s.status = tupled::SolveStatus::hypothesis_failure;
            s.point = bundle.problem.u0;
        } else {
            s = tupled::picard_solve(bundle.problem, c.solve);
            timer.mark("solve");
        }
        s.hypotheses = r.hypotheses;
        report["forced"] = failed && o.force;
        report["solve"] = tupled::to_json(s);
        if (s.status == tupled::SolveStatus::converged) {
            auto v = tupled::verify_solution(bundle.problem.space, bundle.problem.maps, s.point, c.solve.tol);
            report["verification"] = {{"ok", v.ok}, {"residual", v.residual}};
        }
        if (c.trials > 0 && s.status != tupled::SolveStatus::hypothesis_failure &&
            s.status != tupled::SolveStatus::g_inverse_missing) {
            auto u = probe(c, bundle);
            report["uniqueness"] = tupled::to_json(u);
            timer.mark("uniqueness");
            std::cout << "uniqueness: " << u.clusters.size() << " cluster(s) from " << u.converged
                      << " converged starts\n";
        }
        int code = solve_exit_code(s);
        report["exit_code"] = code;
        std::cout << "status: " << tupled::to_string(s.status) << " after " << s.iterations
                  << " iterations, residual " << s.residual << '\n';
        std::cout << "point: " << json(s.point).dump() << '\n';
        if (failed && o.force)
            std::cerr << "warning: solve forced despite failing hypotheses\n";
        write_report(o, std::move(report), timer);
        return code;
    });
}

int cmd_enumerate(Options const& o) {
    Timer timer;
    auto c = load_config(o);
    if (!c.finite())
        throw UsageError("enumerate needs a finite space");
    auto b = cfg::make_finite_problem(c);
    timer.mark("load");
    auto cc = tupled::cross_check(b.finite, b.star, c.enumeration_bound);
    auto prop = tupled::check_coincidence_propagation(b.finite, b.star, c.enumeration_bound);
    timer.mark("enumerate");
    json report = base_report("enumerate", c);
    report["oracle"] = tupled::to_json(cc);
    report["propagation"] = tupled::to_json(prop);
    report["exit_code"] = 0;
    std::cout << "star-coincidence points (" << cc.coincidence.size() << "): " << json(cc.coincidence).dump() << '\n';
    std::cout << "common star-fixed points (" << cc.common_fixed.size() << "): " << json(cc.common_fixed).dump()
              << '\n';
    std::cout << "product-map cross-check: " << (cc.pass() ? "pass" : "FAIL") << '\n';
    write_report(o, std::move(report), timer);
    return cc.pass() ? ok : 1;
}

int cmd_star(std::string const& preset, std::optional<int> n, std::string const& file, std::string const& report_path) {
    if (preset.empty() == file.empty())
        throw UsageError("star needs exactly one of --preset or --file");
    tupled::StarOp star = [&] {
        if (!file.empty()) {
            std::string text = cfg::detail::read_file(file);
            return tupled::parse_star(text);
        }
        auto names = tupled::preset_names();
        if (std::find(names.begin(), names.end(), preset) == names.end())
            throw UsageError("unknown preset '" + preset + "'");
        if (tupled::preset_takes_dimension(preset) && !n)
            throw UsageError("preset '" + preset + "' needs --n");
        try {
            return tupled::preset(preset, n.value_or(0));
        } catch (tupled::StarError const& e) {
            throw UsageError(e.what());
        }
    }();
    bool permuted = tupled::is_permuted(star);
    std::cout << tupled::format_star(star) << "permuted: " << (permuted ? "true" : "false") << '\n';
    if (!report_path.empty()) {
        json r;
        r["schema_version"] = schema_version;
        r["command"] = "star";
        r["n"] = star.n();
        r["matrix"] = star.rows();
        r["permuted"] = permuted;
        std::ofstream out(report_path, std::ios::binary);
        out << r.dump(2) << '\n';
    }
    return ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tupled coincidence points: star operations, hypothesis checks, Picard solves"};
    app.require_subcommand(1);

    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("config", o.config, "problem config file")->required();
        sub->add_option("--report", o.report, "write the JSON report here");
        sub->add_flag("--no-timings", o.no_timings, "omit wall-clock timings from the report");
        sub->add_option("--seed", o.seed, "sampling seed");
        sub->add_option("--samples", o.samples, "sampled pairs per check");
        sub->add_option("--jobs", o.jobs, "worker threads for sampling")->check(CLI::Range(1u, 256u));
    };

    std::string star_preset, star_file, star_report;
    std::optional<int> star_n;
    auto* star = app.add_subcommand("star", "print a star operation and whether it is permuted");
    star->add_option("--preset", star_preset, "named preset");
    star->add_option("--n", star_n, "dimension for cyclic and skew presets");
    star->add_option("--file", star_file, "matrix file");
    star->add_option("--report", star_report, "write the JSON report here");

    auto* check = app.add_subcommand("check", "run the hypothesis checks of a config");
    common(check);

    auto* solve = app.add_subcommand("solve", "check hypotheses, then iterate");
    common(solve);
    solve->add_option("--tol", o.tol, "residual threshold");
    solve->add_option("--max-iter", o.max_iter, "iteration cap");
    solve->add_flag("--force", o.force, "solve even if a hypothesis fails");

    auto* enumerate = app.add_subcommand("enumerate", "exhaustive star-coincidence points of a finite config");
    common(enumerate);
    enumerate->add_option("--bound", o.bound, "maximum number of tuples to scan");

    try {
        app.parse(argc, argv);
    } catch (CLI::CallForHelp const& e) {
        return app.exit(e);
    } catch (CLI::CallForAllHelp const& e) {
        return app.exit(e);
    } catch (CLI::ParseError const& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (star->parsed())
            return cmd_star(star_preset, star_n, star_file, star_report);
        if (check->parsed())
            return cmd_check(o);
        if (solve->parsed())
            return cmd_solve(o);
        if (enumerate->parsed())
            return cmd_enumerate(o);
    } catch (UsageError const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return usage;
    } catch (cfg::MissingFile const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return missing_file;
    } catch (cfg::ConfigError const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return parse;
    } catch (tupled::StarError const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return parse;
    } catch (tupled::dsl::ParseError const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return parse;
    } catch (tupled::BoundExceeded const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bound;
    } catch (tupled::HypothesisError const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return parse;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return usage;
}
