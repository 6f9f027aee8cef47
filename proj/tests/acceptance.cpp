// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "eeb/bonus.hpp"
#include "eeb/boundary.hpp"
#include "eeb/error.hpp"
#include "eeb/pricing.hpp"
#include "eeb/psor.hpp"
#include "support/oracles.hpp"

using namespace eeb;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool ok = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        if (ok) detail << why;
        ok = false;
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

bool close_rel(double a, double b, double tol) {
    if (a == b) return true;
    return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

bool same_points(const BoundarySet& a, const BoundarySet& b, double tol) {
    if (a.empty() != b.empty() || a.points.size() != b.points.size()) return false;
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        if (!close_rel(a.points[i], b.points[i], tol)) return false;
    }
    return true;
}

std::string show(const BoundarySet& b) {
    if (b.empty()) return "{} (" + b.diagnostic + ")";
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < b.points.size(); ++i) out << (i ? ", " : "") << b.points[i];
    out << '}';
    return out.str();
}

struct Row {
    MarketParams m;
    double x[4];
};

const Row kRows[] = {
    {{0.03, 0.02, 0.3}, {1, 3, 4, 5}},
    {{0.02, 0.03, 0.3}, {1, 3, 4, 5}},
    {{0.03, 0.02, 0.3}, {1, 2, 3, 4.5}},
};

// Rates on a 1/1000 lattice and strikes on a 1/4 lattice keep the exact
// fractions small.
oracle::Frac rate_frac(double v) { return {std::llround(v * 1000), 1000}; }
oracle::Frac strike_frac(double v) { return {std::llround(v * 4), 4}; }

// ---------------------------------------------------------------------------

Outcome criterion1() {
    Outcome o;
    const std::vector<std::vector<double>> expected = {{1.5}, {1, 4, 5}, {1.5, 4.5}};
    const auto start = Clock::now();
    std::vector<BoundarySet> got;
    for (const Row& row : kRows) got.push_back(condor_boundary(row.m, row.x[0], row.x[1], row.x[2], row.x[3]));
    const double elapsed = seconds_since(start);
    for (std::size_t i = 0; i < 3; ++i) {
        const Row& row = kRows[i];
        const auto exact = oracle::condor_exact(rate_frac(row.m.r), rate_frac(row.m.q), strike_frac(row.x[0]),
                                                strike_frac(row.x[1]), strike_frac(row.x[2]), strike_frac(row.x[3]));
        std::vector<double> exact_d;
        for (const auto& f : exact) exact_d.push_back(f.to_double());
        if (got[i].points != expected[i] || exact_d != expected[i]) o.fail("row " + std::to_string(i + 1) + " got " + show(got[i]));
    }
    o.detail << (o.ok ? "" : "; ") << "rows {1.5} {1,4,5} {1.5,4.5}, " << elapsed * 1e3 << " ms";
    if (elapsed >= 1e-3) o.fail("runtime " + std::to_string(elapsed * 1e3) + " ms");
    return o;
}

struct Criterion2Data {
    std::vector<PsorSolution> defaults;  // kept for the complementarity check
};

Outcome criterion2(Criterion2Data& data) {
    Outcome o;
    auto run = [&](const PsorConfig& cfg, double tol, const char* label) {
        double worst = 0.0;
        const auto start = Clock::now();
        for (const Row& row : kRows) {
            const auto spec = make_condor(row.x[0], row.x[1], row.x[2], row.x[3]);
            const auto rep = verify_against_analytic(spec, row.m, cfg);
            if (!rep.passes(tol)) o.fail(std::string(label) + ": " + rep.message + " " + show(rep.numerical));
            worst = std::max(worst, rep.max_abs_error());
        }
        o.detail << label << " max rel err " << worst << " (" << seconds_since(start) << " s); ";
    };
    run(PsorConfig{}, 5e-4, "defaults");
    PsorConfig ci;
    ci.n_space = 4000;
    ci.tol = 1e-10;
    run(ci, 5e-3, "CI profile");

    for (const Row& row : kRows) {
        data.defaults.push_back(psor_solve(make_condor(row.x[0], row.x[1], row.x[2], row.x[3]), row.m, PsorConfig{}));
    }
    return o;
}

Outcome criterion3() {
    Outcome o;
    const MarketParams m{0.03, 0.02, 0.3};
    const std::vector<std::pair<std::string, DerivativeSpec>> specs = {
        {"vanilla call", make_vanilla(OptionType::Call, 1.0)},
        {"vanilla put", make_vanilla(OptionType::Put, 1.0)},
        {"condor", make_condor(1, 3, 4, 5)},
        {"british call", make_british(OptionType::Call, 0.05, 1.0)},
        {"british put", make_british(OptionType::Put, 0.05, 1.0)},
    };
    const auto start = Clock::now();
    double worst = 0.0;
    for (const auto& [name, spec] : specs) {
        const auto fb = bonus_symbolic(spec, m);
        int used = 0;
        for (int i = 0; i < 400; ++i) {
            const double s = 0.3 * std::pow(8.0 / 0.3, i / 399.0);
            if (in_kink_band(spec, m, s)) continue;
            const double num = bonus_numeric_oracle(spec, m, s);
            const double sym = fb(s);
            const double err = std::abs(num - sym) / (1.0 + std::abs(sym));
            worst = std::max(worst, err);
            if (err > 1e-4) o.fail(name + " at S=" + std::to_string(s) + ": " + std::to_string(num) + " vs " + std::to_string(sym));
            ++used;
        }
        if (used < 200) o.fail(name + ": only " + std::to_string(used) + " points");
    }
    const double elapsed = seconds_since(start);
    o.detail << (o.ok ? "" : "; ") << "max scaled err " << worst << ", " << elapsed << " s";
    if (elapsed >= 30.0) o.fail("runtime");
    return o;
}

Outcome criterion4() {
    Outcome o;
    const MarketParams m{0.03, 0.02, 0.3};
    const double T = 1.0;
    const double g = average_ratio_root(m, AveragingSpec::geometric(), T);
    const double res = std::abs(m.r - m.q * g - std::log(g) / T);
    if (res > 1e-12) o.fail("geometric residual " + std::to_string(res));
    if (!close_rel(g, static_cast<double>(oracle::geometric_root(0.03L, 0.02L, 1.0L)), 1e-12)) o.fail("geometric vs bisection");

    const double y1 = average_ratio_root(m, AveragingSpec::weighted(1.0, 1e-10), T);
    const double arith = (m.r + 1 / T) / (m.q + 1 / T);
    if (std::abs(y1 - arith) > 1e-8) o.fail("p=1 weighted " + std::to_string(y1));

    const double y0 = average_ratio_root(m, AveragingSpec::weighted(1e-9, 0.0), T);
    if (std::abs(y0 - g) > 1e-6) o.fail("p=1e-9 weighted " + std::to_string(y0));

    const MarketParams eq{0.04, 0.04, 0.3};
    for (const auto& avg : {AveragingSpec::geometric(), AveragingSpec::weighted(0.5, 1.0), AveragingSpec::weighted(-1.0, 2.0)}) {
        const double y = average_ratio_root(eq, avg, T);
        if (std::abs(y - 1.0) > 1e-13) o.fail("r = q root " + std::to_string(y));
    }
    o.detail << (o.ok ? "" : "; ") << "G=" << g << " residual " << res << ", |Y(p=1)-arith|=" << std::abs(y1 - arith)
             << ", |Y(p=1e-9)-G|=" << std::abs(y0 - g);
    return o;
}

Outcome criterion5() {
    Outcome o;
    oracle::Draw d(2024);
    auto rate = [&] { return d.chance(0.05) ? 0.0 : d.uniform(0.0, 0.12); };
    int families = 0;
    auto family = [&](const std::string& name, const std::function<std::pair<BoundarySet, BoundarySet>()>& draw) {
        ++families;
        for (int i = 0; i < 1000; ++i) {
            const auto [generic, closed] = draw();
            if (!same_points(generic, closed, 1e-12)) {
                o.fail(name + " draw " + std::to_string(i) + ": generic " + show(generic) + " vs " + show(closed));
                return;
            }
        }
    };
    auto generic = [](const DerivativeSpec& s, const MarketParams& m) { return extract_boundary(bonus_symbolic(s, m)); };

    for (OptionType type : {OptionType::Call, OptionType::Put}) {
        const std::string side = type == OptionType::Call ? "call" : "put";
        family("vanilla " + side, [&] {
            const MarketParams m{rate(), rate(), d.uniform(0.1, 0.5)};
            const double x = d.uniform(0.2, 5.0);
            return std::pair{generic(make_vanilla(type, x), m), vanilla_boundary(m, type, x)};
        });
        family("british " + side, [&] {
            MarketParams m{rate(), rate(), d.uniform(0.1, 0.5)};
            const double mu = d.uniform(-0.05, 0.1);
            if (m.q + mu <= 0.0) m.q = -mu + d.uniform(0.001, 0.05);
            const double x = d.uniform(0.2, 5.0);
            return std::pair{generic(make_british(type, mu, x), m), british_boundary(m, mu, x, type)};
        });
        family("shout " + side, [&] {
            const MarketParams m{rate(), rate(), d.uniform(0.1, 0.5)};
            const double x = d.uniform(0.2, 5.0);
            return std::pair{generic(make_shout(type, x), m), shout_boundary(m, x, type)};
        });
        family("asian arithmetic " + side, [&] {
            const MarketParams m{rate(), rate(), 0.3};
            const double T = d.uniform(0.05, 5.0);
            return std::pair{generic(make_asian(type, AveragingSpec::arithmetic(), T), m),
                             asian_ratio_boundary(m, AveragingSpec::arithmetic(), type, T)};
        });
        family("asian geometric " + side, [&] {
            const MarketParams m{rate(), rate(), 0.3};
            const double T = d.uniform(0.05, 5.0);
            return std::pair{generic(make_asian(type, AveragingSpec::geometric(), T), m),
                             asian_ratio_boundary(m, AveragingSpec::geometric(), type, T)};
        });
        family("asian weighted " + side, [&] {
            const MarketParams m{rate(), rate(), 0.3};
            const double T = d.uniform(0.05, 5.0);
            const auto avg = AveragingSpec::weighted(d.uniform(-2.0, 2.0), d.uniform(0.0, 3.0));
            return std::pair{generic(make_asian(type, avg, T), m), asian_ratio_boundary(m, avg, type, T)};
        });
        family("lookback " + side, [&] {
            const MarketParams m{rate(), rate(), 0.3};
            const auto spec = make_lookback(type);
            return std::pair{generic(spec, m), asian_ratio_boundary(m, spec.avg, type, spec.expiry)};
        });
    }
    family("condor", [&] {
        const MarketParams m{d.uniform(0.001, 0.12), rate(), 0.3};
        double x1 = d.uniform(0.2, 3.0), x2 = x1 + d.uniform(0.05, 2.0);
        double x3 = d.chance(0.1) ? x2 : x2 + d.uniform(0.05, 2.0);
        double x4 = x3 + d.uniform(0.05, 3.0);
        return std::pair{generic(make_condor(x1, x2, x3, x4), m), condor_boundary(m, x1, x2, x3, x4)};
    });
    o.detail << (o.ok ? "" : "; ") << families << " families x 1000 draws at 1e-12";
    return o;
}

Outcome criterion6(const Criterion2Data& data) {
    Outcome o;
    oracle::Draw d(77);

    // Strike scaling: the spot boundary is homogeneous of degree one in the strikes.
    int scaled = 0;
    for (double c : {0.5, 2.0, 10.0}) {
        for (int i = 0; i < 200; ++i) {
            const MarketParams m{d.uniform(0.001, 0.1), d.uniform(0.0, 0.1), 0.3};
            const double x1 = d.uniform(0.5, 2.0), x2 = x1 + d.uniform(0.1, 1.0), x3 = x2 + d.uniform(0.0, 1.0),
                         x4 = x3 + d.uniform(0.1, 2.0);
            const double mu = d.uniform(0.0, 0.05) + (m.q == 0.0 ? 0.01 : 0.0);
            std::vector<std::pair<BoundarySet, BoundarySet>> pairs = {
                {condor_boundary(m, x1, x2, x3, x4), condor_boundary(m, c * x1, c * x2, c * x3, c * x4)},
                {vanilla_boundary(m, OptionType::Call, x1), vanilla_boundary(m, OptionType::Call, c * x1)},
                {vanilla_boundary(m, OptionType::Put, x1), vanilla_boundary(m, OptionType::Put, c * x1)},
                {british_boundary(m, mu, x2, OptionType::Call), british_boundary(m, mu, c * x2, OptionType::Call)},
                {shout_boundary(m, x3, OptionType::Put), shout_boundary(m, c * x3, OptionType::Put)},
            };
            for (auto& [base, big] : pairs) {
                for (double& p : base.points) p *= c;
                if (!same_points(base, big, 1e-12)) o.fail("scaling c=" + std::to_string(c) + ": " + show(base) + " vs " + show(big));
                ++scaled;
            }
        }
    }

    // Case split: exactly one case holds and it agrees with exact arithmetic.
    int counts[4] = {0, 0, 0, 0};
    for (int i = 0; i < 10000; ++i) {
        const double r = std::llround(d.uniform(1, 120)) / 1000.0, q = std::llround(d.uniform(0, 120)) / 1000.0;
        const double x1 = std::llround(d.uniform(1, 12)) / 4.0;
        const double x2 = x1 + std::llround(d.uniform(1, 8)) / 4.0;
        const double x3 = x2 + std::llround(d.uniform(0, 8)) / 4.0;
        const double x4 = x3 + std::llround(d.uniform(1, 12)) / 4.0;
        const MarketParams m{r, q, 0.3};
        const double tail = x3 + x2 - x1 - x4;
        const bool c1 = tail > 0 && r * (x3 + x2 - x1) >= q * x4;
        const bool c2 = tail > 0 && r * (x3 + x2 - x1) < q * x4;
        const bool c3 = tail <= 0;
        if (c1 + c2 + c3 != 1) o.fail("case predicates not exclusive");
        const auto cs = condor_case(m, x1, x2, x3, x4);
        ++counts[static_cast<int>(cs)];
        const auto exact = oracle::condor_exact(rate_frac(r), rate_frac(q), strike_frac(x1), strike_frac(x2),
                                                strike_frac(x3), strike_frac(x4));
        const auto got = condor_boundary(m, x1, x2, x3, x4);
        bool match = got.points.size() == exact.size();
        for (std::size_t k = 0; match && k < exact.size(); ++k) match = close_rel(got.points[k], exact[k].to_double(), 1e-12);
        if (!match) {
            o.fail("condor (" + std::to_string(x1) + "," + std::to_string(x2) + "," + std::to_string(x3) + "," +
                   std::to_string(x4) + ") r=" + std::to_string(r) + " q=" + std::to_string(q) + ": " + show(got));
        }
    }
    if (counts[1] == 0 || counts[2] == 0 || counts[3] == 0) o.fail("a condor case was never drawn");

    // Discrete complementarity at every node of the retained levels.
    for (const auto& sol : data.defaults) {
        const auto rep = check_complementarity(sol);
        if (!rep.ok) o.fail("complementarity: min excess " + std::to_string(rep.min_excess) + ", min residual " +
                            std::to_string(rep.min_residual) + ", max product " + std::to_string(rep.max_product));
    }

    // Put-call parity.
    double parity = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const MarketParams m{d.uniform(0.0, 0.15), d.uniform(0.0, 0.15), d.uniform(0.05, 0.8)};
        const double T = d.uniform(0.01, 5.0), t = d.uniform(0.0, 0.99) * T;
        const double s = d.uniform(0.2, 5.0), x = d.uniform(0.2, 5.0);
        const double lhs = bs_call(m, t, s, x, T).price - bs_put(m, t, s, x, T).price;
        const double rhs = s * std::exp(-m.q * (T - t)) - x * std::exp(-m.r * (T - t));
        parity = std::max(parity, std::abs(lhs - rhs));
    }
    if (parity > 1e-12) o.fail("parity error " + std::to_string(parity));

    // omega robustness: every relaxation factor gives the same boundary, and it
    // stays within the scaled-profile tolerance.
    PsorConfig cfg;
    cfg.n_space = 4000;
    cfg.tol = 1e-10;
    double spread = 0.0;
    for (const Row& row : kRows) {
        const auto spec = make_condor(row.x[0], row.x[1], row.x[2], row.x[3]);
        std::vector<BoundarySet> found;
        for (double w : {1.0, 1.2, 1.4, 1.6}) {
            cfg.omega = w;
            const auto rep = verify_against_analytic(spec, row.m, cfg);
            if (!rep.passes(5e-3)) o.fail("omega " + std::to_string(w) + ": " + rep.message);
            found.push_back(rep.numerical);
        }
        for (const auto& b : found) {
            if (b.points.size() != found[0].points.size()) {
                o.fail("omega changes the point count");
                continue;
            }
            for (std::size_t k = 0; k < b.points.size(); ++k) {
                spread = std::max(spread, std::abs(b.points[k] - found[0].points[k]) / found[0].points[k]);
            }
        }
    }
    if (spread > 1e-6) o.fail("omega spread " + std::to_string(spread));

    o.detail << (o.ok ? "" : "; ") << scaled << " scaling checks, cases " << counts[1] << "/" << counts[2] << "/"
             << counts[3] << ", parity " << parity << ", omega spread " << spread;
    return o;
}

Outcome criterion7() {
    Outcome o;
    oracle::Draw d(7);
    for (int i = 0; i < 100; ++i) {
        const MarketParams m{d.uniform(0.0, 0.15), d.uniform(0.0, 0.15), d.uniform(0.05, 0.8)};
        const double x = d.uniform(0.1, 10.0);
        for (OptionType type : {OptionType::Call, OptionType::Put}) {
            const auto b = catalogue_boundary(make_shout(type, x), m);
            if (b.points != std::vector<double>{x}) o.fail("shout " + show(b));
            const auto g = extract_boundary(bonus_symbolic(make_shout(type, x), m));
            if (g.points != std::vector<double>{x}) o.fail("shout generic " + show(g));
        }
    }
    int british = 0;
    for (int i = 0; i < 1000; ++i) {
        const MarketParams m{d.uniform(0.0, 0.15), d.uniform(0.001, 0.15), d.uniform(0.05, 0.8)};
        const double x = d.uniform(0.1, 10.0);
        for (OptionType type : {OptionType::Call, OptionType::Put}) {
            const auto b = british_boundary(m, 0.0, x, type);
            const auto v = vanilla_boundary(m, type, x);
            if (b.points != v.points || b.kind != v.kind) o.fail("british " + show(b) + " vs vanilla " + show(v));
            ++british;
        }
    }
    o.detail << (o.ok ? "" : "; ") << "200 shout checks, " << british << " British/vanilla identities";
    return o;
}

}  // namespace

int main() {
    int failures = 0;
    auto report = [&](int n, const char* title, const std::function<Outcome()>& fn) {
        Outcome out;
        try {
            out = fn();
        } catch (const std::exception& e) {
            out.fail(std::string("exception: ") + e.what());
        }
        if (!out.ok) ++failures;
        std::printf("%s criterion %d (%s): %s\n", out.ok ? "PASS" : "FAIL", n, title, out.detail.str().c_str());
        std::fflush(stdout);
    };

    Criterion2Data data;
    report(1, "condor table, exact", criterion1);
    report(2, "condor table, PSOR", [&] { return criterion2(data); });
    report(3, "bonus oracle equivalence", criterion3);
    report(4, "transcendental roots", criterion4);
    report(5, "catalogue vs generic extraction", criterion5);
    report(6, "property suite", [&] { return criterion6(data); });
    report(7, "shout and British", criterion7);
    return failures == 0 ? 0 : 1;
}
