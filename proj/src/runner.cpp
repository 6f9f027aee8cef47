#include "eeb/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

#include "eeb/bonus.hpp"
#include "eeb/boundary.hpp"
#include "eeb/psor.hpp"

namespace eeb {

namespace {

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
    const std::size_t pool = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
    if (pool <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (std::size_t w = 0; w < pool; ++w) {
        threads.emplace_back([&]() {
            for (std::size_t i = next++; i < n; i = next++) body(i);
        });
    }
    for (auto& t : threads) t.join();
}

// Indices of the scenarios sorted by id.
std::vector<std::size_t> by_id(const std::vector<Scenario>& scenarios) {
    std::vector<std::size_t> order(scenarios.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scenarios[a].id < scenarios[b].id; });
    return order;
}

std::vector<double> strikes_of(const DerivativeSpec& s) {
    if (s.kind == Kind::Strategy) {
        std::vector<double> out;
        for (const Leg& l : s.legs) out.push_back(l.strike);
        return out;
    }
    if (s.path_dependent()) return {};
    return {s.strike};
}

std::string percent(double v) { return format_csv(v * 100.0) + "%"; }

std::string error_cell(double rel) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f%%", rel * 100.0);
    return buf;
}

std::string short_points(const std::vector<double>& pts) {
    std::string out;
    char buf[32];
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.8g", pts[i]);
        out += (i ? "<br>" : "") + std::string(buf);
    }
    return out;
}

std::string join_points(const std::vector<double>& pts) {
    std::string out;
    for (std::size_t i = 0; i < pts.size(); ++i) out += (i ? "<br>" : "") + format_csv(pts[i]);
    return out;
}

std::size_t max_strikes(const std::vector<Scenario>& scenarios) {
    std::size_t n = 0;
    for (const Scenario& s : scenarios) n = std::max(n, strikes_of(s.spec).size());
    return n;
}

std::string strike_cells(const DerivativeSpec& spec, std::size_t width) {
    const auto xs = strikes_of(spec);
    std::string out;
    for (std::size_t k = 0; k < width; ++k) out += " " + (k < xs.size() ? format_csv(xs[k]) : std::string()) + " |";
    return out;
}

std::string strike_header(std::size_t width) {
    std::string head, rule;
    for (std::size_t k = 0; k < width; ++k) {
        head += " X" + std::to_string(k + 1) + " |";
        rule += "---|";
    }
    return head + "\n" + rule;
}

void write_text(const std::filesystem::path& path, const std::string& text, RunReport& rep) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    rep.files.push_back(path);
}

int exit_for(const std::exception& e) {
    if (dynamic_cast<const InvalidSpec*>(&e) || dynamic_cast<const Unsupported*>(&e)) return kExitInputError;
    return kExitVerificationFailure;
}

BoundarySet analytic_boundary(const Scenario& sc, std::string& note) {
    try {
        return catalogue_boundary(sc.spec, sc.params);
    } catch (const InvalidSpec&) {
        if (sc.spec.kind != Kind::Strategy) throw;
        note = "closed form needs r > 0; generic extraction";
        return extract_boundary(bonus_symbolic(sc.spec, sc.params));
    }
}

PsorConfig effective_config(const Scenario& sc, const RunOptions& opts) {
    PsorConfig cfg = sc.psor.value_or(PsorConfig{});
    if (opts.n_space) cfg.n_space = *opts.n_space;
    if (opts.n_time) cfg.n_time = *opts.n_time;
    if (opts.tol) cfg.tol = *opts.tol;
    return cfg;
}

struct PsorRow {
    VerificationReport report;
    std::string error;
    int exit_code = kExitOk;
    double tolerance = 0.0;
};

RunReport psor_verify_impl(const std::vector<Scenario>& scenarios, const RunOptions& opts,
                           const std::string& summary_name) {
    RunReport rep;
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        if (scenarios[i].wants(Output::PsorVerify)) picked.push_back(i);
    }
    std::vector<PsorRow> rows(scenarios.size());
    parallel_for(picked.size(), opts.workers, [&](std::size_t k) {
        const Scenario& sc = scenarios[picked[k]];
        PsorRow& row = rows[picked[k]];
        row.tolerance = sc.tolerance.value_or(opts.default_tolerance);
        try {
            row.report = verify_against_analytic(sc.spec, sc.params, effective_config(sc, opts));
            if (!row.report.passes(row.tolerance)) row.exit_code = kExitVerificationFailure;
        } catch (const Error& e) {
            row.error = e.what();
            row.exit_code = exit_for(e);
        }
    });

    if (opts.write_files) std::filesystem::create_directories(opts.out_dir);
    const std::size_t width = max_strikes(scenarios);
    std::ostringstream md;
    md << "| id | r | q | σ |" << strike_header(width).substr(0, strike_header(width).find('\n'))
       << " S*_theor | S*_calc | error | status |\n";
    md << "|---|---|---|---|" << strike_header(width).substr(strike_header(width).find('\n') + 1)
       << "---|---|---|---|\n";
    for (std::size_t i : by_id(scenarios)) {
        if (!scenarios[i].wants(Output::PsorVerify)) continue;
        const Scenario& sc = scenarios[i];
        const PsorRow& row = rows[i];
        rep.exit_code = std::max(rep.exit_code, row.exit_code);

        std::ostringstream csv;
        csv << "theoretical,calculated,relative_error\n";
        std::vector<double> theor, calc;
        std::string errors, status;
        if (!row.error.empty()) {
            status = "error: " + row.error;
        } else {
            for (const BoundaryPair& p : row.report.pairs) {
                csv << format_csv(p.theoretical) << ',' << format_csv(p.calculated) << ','
                    << format_csv(p.relative_error) << '\n';
                theor.push_back(p.theoretical);
                calc.push_back(p.calculated);
                errors += (errors.empty() ? "" : "<br>") + error_cell(p.relative_error);
            }
            status = row.exit_code == kExitOk ? "pass" : "fail";
            if (!row.report.message.empty()) status += " (" + row.report.message + ")";
        }
        md << "| " << sc.id << " | " << percent(sc.params.r) << " | " << percent(sc.params.q) << " | "
           << percent(sc.params.sigma) << " |" << strike_cells(sc.spec, width) << ' ' << join_points(theor)
           << " | " << short_points(calc) << " | " << errors << " | " << status << " |\n";
        if (opts.write_files) write_text(opts.out_dir / (sc.id + "_psor.csv"), csv.str(), rep);
    }
    rep.summary = md.str();
    if (opts.write_files) write_text(opts.out_dir / summary_name, rep.summary, rep);
    return rep;
}

}  // namespace

ProfileGrid parse_grid(const std::string& text) {
    ProfileGrid g;
    const auto a = text.find(':');
    const auto b = a == std::string::npos ? std::string::npos : text.find(':', a + 1);
    if (b == std::string::npos) throw InvalidSpec("grid must be lo:hi:n, got '" + text + "'");
    try {
        std::size_t used = 0;
        const std::string lo = text.substr(0, a), hi = text.substr(a + 1, b - a - 1), n = text.substr(b + 1);
        g.lo = std::stod(lo, &used);
        if (used != lo.size()) throw std::invalid_argument(lo);
        g.hi = std::stod(hi, &used);
        if (used != hi.size()) throw std::invalid_argument(hi);
        g.n = std::stoi(n, &used);
        if (used != n.size()) throw std::invalid_argument(n);
    } catch (const std::logic_error&) {
        throw InvalidSpec("grid must be lo:hi:n, got '" + text + "'");
    }
    if (!(g.lo > 0.0) || !(g.hi >= g.lo) || g.n < 1 || (g.n > 1 && g.hi == g.lo)) {
        throw InvalidSpec("grid needs 0 < lo < hi and n >= 1 (lo = hi only with n = 1)");
    }
    return g;
}

std::string bonus_profile_csv(const Scenario& sc, const ProfileGrid& grid) {
    const BonusFunction fb = bonus_symbolic(sc.spec, sc.params);
    const bool ratio = fb.variable == StateVariable::Ratio;
    std::vector<double> boundary;
    try {
        boundary = extract_boundary(fb).points;
    } catch (const AnalysisError&) {
        // Profile is still meaningful without the boundary labels.
    }
    auto matches = [](double x, double b) { return std::abs(x - b) <= 1e-12 * b; };

    std::ostringstream csv;
    csv << (ratio ? "ratio" : "S") << ",fb_symbolic,fb_oracle,region,kink\n";
    for (int i = 0; i < grid.n; ++i) {
        double x = grid.n == 1 ? grid.lo
                   : i + 1 == grid.n ? grid.hi
                                     : grid.lo + (grid.hi - grid.lo) * i / (grid.n - 1);
        bool kink = false;
        for (double b : fb.breakpoints) {
            if (matches(x, b)) {
                x = b;
                kink = true;
            }
        }
        const double value = fb(x);
        std::string oracle;
        if (!ratio && sc.spec.has_european_closed_form()) {
            try {
                if (!in_kink_band(sc.spec, sc.params, x)) {
                    oracle = format_csv(bonus_numeric_oracle(sc.spec, sc.params, x));
                }
            } catch (const Error&) {
                oracle.clear();
            }
        }
        const bool on_boundary = std::any_of(boundary.begin(), boundary.end(), [&](double b) { return matches(x, b); });
        const char* region = on_boundary ? "boundary" : value > 0.0 ? "stopping" : "continuation";
        csv << format_csv(x) << ',' << format_csv(value) << ',' << oracle << ',' << region << ',' << (kink ? 1 : 0)
            << '\n';
    }
    return csv.str();
}

RunReport run_boundary(const std::vector<Scenario>& scenarios, const RunOptions& opts) {
    RunReport rep;
    struct Row {
        BoundarySet set;
        std::string note;
        std::string error;
        int exit_code = kExitOk;
    };
    std::vector<Row> rows(scenarios.size());
    parallel_for(scenarios.size(), opts.workers, [&](std::size_t i) {
        if (!scenarios[i].wants(Output::Boundary)) return;
        try {
            rows[i].set = analytic_boundary(scenarios[i], rows[i].note);
        } catch (const Error& e) {
            rows[i].error = e.what();
            rows[i].exit_code = exit_for(e);
        }
    });

    if (opts.write_files) std::filesystem::create_directories(opts.out_dir);
    const std::size_t width = max_strikes(scenarios);
    const std::string sh = strike_header(width);
    std::ostringstream md;
    md << "| id | kind | r | q | σ |" << sh.substr(0, sh.find('\n')) << " S*_theor | variable | note |\n";
    md << "|---|---|---|---|---|" << sh.substr(sh.find('\n') + 1) << "---|---|---|\n";
    for (std::size_t i : by_id(scenarios)) {
        const Scenario& sc = scenarios[i];
        if (!sc.wants(Output::Boundary)) continue;
        const Row& row = rows[i];
        rep.exit_code = std::max(rep.exit_code, row.exit_code);
        const char* variable = row.set.kind == BoundaryKind::PathRatio ? "ratio" : "S";
        std::string note = row.error.empty() ? row.note : "error: " + row.error;
        if (row.error.empty() && row.set.empty()) note = row.set.diagnostic;

        std::ostringstream csv;
        csv << "index,point,variable,note\n";
        if (row.error.empty() && !row.set.empty()) {
            for (std::size_t k = 0; k < row.set.points.size(); ++k) {
                csv << k << ',' << format_csv(row.set.points[k]) << ',' << variable << ',' << note << '\n';
            }
        } else {
            csv << ",,," << note << '\n';
        }
        md << "| " << sc.id << " | " << (is_condor(sc.spec) ? "condor" : std::string(kind_name(sc.spec.kind)))
           << " | " << percent(sc.params.r) << " | " << percent(sc.params.q) << " | " << percent(sc.params.sigma)
           << " |" << strike_cells(sc.spec, width) << ' ' << join_points(row.set.points) << " | "
           << (row.set.empty() ? "" : variable) << " | " << note << " |\n";
        if (opts.write_files) write_text(opts.out_dir / (sc.id + "_boundary.csv"), csv.str(), rep);
    }
    rep.summary = md.str();
    if (opts.write_files) write_text(opts.out_dir / "boundary_summary.md", rep.summary, rep);
    return rep;
}

RunReport run_bonus_profile(const std::vector<Scenario>& scenarios, const RunOptions& opts) {
    RunReport rep;
    std::vector<std::string> csvs(scenarios.size()), errors(scenarios.size());
    std::vector<int> codes(scenarios.size(), kExitOk);
    parallel_for(scenarios.size(), opts.workers, [&](std::size_t i) {
        if (!scenarios[i].wants(Output::BonusProfile)) return;
        try {
            csvs[i] = bonus_profile_csv(scenarios[i], opts.grid);
        } catch (const Error& e) {
            errors[i] = e.what();
            codes[i] = exit_for(e);
        }
    });
    if (opts.write_files) std::filesystem::create_directories(opts.out_dir);
    std::ostringstream md;
    md << "| id | kind | rows | status |\n|---|---|---|---|\n";
    for (std::size_t i : by_id(scenarios)) {
        const Scenario& sc = scenarios[i];
        if (!sc.wants(Output::BonusProfile)) continue;
        rep.exit_code = std::max(rep.exit_code, codes[i]);
        md << "| " << sc.id << " | " << kind_name(sc.spec.kind) << " | "
           << (errors[i].empty() ? std::to_string(opts.grid.n) : "0") << " | "
           << (errors[i].empty() ? "ok" : "error: " + errors[i]) << " |\n";
        if (opts.write_files && errors[i].empty()) {
            write_text(opts.out_dir / (sc.id + "_bonus_profile.csv"), csvs[i], rep);
        }
    }
    rep.summary = md.str();
    return rep;
}

RunReport run_psor_verify(const std::vector<Scenario>& scenarios, const RunOptions& opts) {
    return psor_verify_impl(scenarios, opts, "psor_summary.md");
}

std::vector<Scenario> table1_scenarios() {
    struct Row {
        double r, q, x1, x2, x3, x4;
    };
    const Row rows[] = {{0.03, 0.02, 1, 3, 4, 5}, {0.02, 0.03, 1, 3, 4, 5}, {0.03, 0.02, 1, 2, 3, 4.5}};
    std::vector<Scenario> out;
    for (std::size_t i = 0; i < 3; ++i) {
        Scenario sc;
        sc.id = "table1_row" + std::to_string(i + 1);
        sc.params = {rows[i].r, rows[i].q, 0.3};
        sc.spec = make_condor(rows[i].x1, rows[i].x2, rows[i].x3, rows[i].x4);
        sc.outputs = {Output::PsorVerify};
        out.push_back(std::move(sc));
    }
    return out;
}

RunReport run_table1(const RunOptions& opts) {
    return psor_verify_impl(table1_scenarios(), opts, "table1_summary.md");
}

}  // namespace eeb
