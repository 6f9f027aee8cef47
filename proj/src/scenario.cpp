#include "eeb/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace eeb {

namespace {

constexpr Output kOutputs[] = {Output::Boundary, Output::BonusProfile, Output::PsorVerify};

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = s.find(',');
        out.push_back(trim(s.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        s.remove_prefix(comma + 1);
    }
    return out;
}

double parse_double(std::string_view s, int line, std::string_view key) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    if (!s.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) {
        throw ParseError(line, "key '" + std::string(key) + "': expected a number, got '" + std::string(s) + "'");
    }
    return v;
}

int parse_int(std::string_view s, int line, std::string_view key) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw ParseError(line, "key '" + std::string(key) + "': expected an integer, got '" + std::string(s) + "'");
    }
    return v;
}

bool parse_bool(std::string_view s, int line, std::string_view key) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    throw ParseError(line, "key '" + std::string(key) + "': expected true or false");
}

std::vector<double> parse_doubles(std::string_view s, int line, std::string_view key) {
    std::vector<double> out;
    for (std::string_view item : split_list(s)) out.push_back(parse_double(item, line, key));
    return out;
}

std::string supported_kinds() {
    std::string out;
    for (Kind k : all_kinds()) {
        out += kind_name(k);
        out += ", ";
    }
    return out + "condor";
}

struct Section {
    int first_line = 0;
    std::vector<std::pair<std::string, std::pair<std::string, int>>> entries;  // key -> (value, line)
};

void apply_psor_key(PsorConfig& cfg, std::string_view key, std::string_view value, int line) {
    if (key == "n_time") cfg.n_time = parse_int(value, line, key);
    else if (key == "n_space") cfg.n_space = parse_int(value, line, key);
    else if (key == "lo") cfg.lo = parse_double(value, line, key);
    else if (key == "hi") cfg.hi = parse_double(value, line, key);
    else if (key == "omega") cfg.omega = parse_double(value, line, key);
    else if (key == "tol") cfg.tol = parse_double(value, line, key);
    else if (key == "T") cfg.expiry = parse_double(value, line, key);
    else if (key == "theta") cfg.theta = parse_double(value, line, key);
    else if (key == "coordinate") {
        if (value == "log") cfg.coordinate = Coordinate::LogSpot;
        else if (value == "raw") cfg.coordinate = Coordinate::RawSpot;
        else throw ParseError(line, "psor.coordinate must be log or raw");
    } else if (key == "reference") cfg.reference = parse_double(value, line, key);
    else if (key == "auto_widen") cfg.auto_widen = parse_bool(value, line, key);
    else if (key == "widen_margin") cfg.widen_margin = parse_double(value, line, key);
    else if (key == "max_sweeps") cfg.max_sweeps = parse_int(value, line, key);
    else if (key == "min_island_nodes") cfg.min_island_nodes = parse_int(value, line, key);
    else if (key == "detection_slack") cfg.detection_slack = parse_double(value, line, key);
    else throw ParseError(line, "unknown key 'psor." + std::string(key) + "'");
}

Scenario build_scenario(const Section& sec, std::size_t ordinal) {
    Scenario sc;
    sc.id = "scenario" + std::to_string(ordinal + 1);
    std::string kind_text;
    int kind_line = sec.first_line;
    std::vector<double> strikes, weights;
    int strikes_line = sec.first_line;
    double expiry = 1.0, p = 1.0, lambda = 0.0, mu_c = 0.0;
    bool have_r = false, have_q = false, have_sigma = false;
    std::set<std::string> seen;

    for (const auto& [key, vl] : sec.entries) {
        const auto& [value, line] = vl;
        if (!seen.insert(key).second) throw ParseError(line, "duplicate key '" + key + "'");
        if (key == "id") {
            if (value.empty()) throw ParseError(line, "id must not be empty");
            sc.id = value;
        } else if (key == "kind") {
            kind_text = value;
            kind_line = line;
        } else if (key == "r") {
            sc.params.r = parse_double(value, line, key);
            have_r = true;
        } else if (key == "q") {
            sc.params.q = parse_double(value, line, key);
            have_q = true;
        } else if (key == "sigma") {
            sc.params.sigma = parse_double(value, line, key);
            have_sigma = true;
        } else if (key == "strikes" || key == "strike") {
            strikes = parse_doubles(value, line, key);
            strikes_line = line;
        } else if (key == "weights") {
            weights = parse_doubles(value, line, key);
        } else if (key == "T") {
            expiry = parse_double(value, line, key);
        } else if (key == "p") {
            p = parse_double(value, line, key);
        } else if (key == "lambda") {
            lambda = parse_double(value, line, key);
        } else if (key == "mu_c") {
            mu_c = parse_double(value, line, key);
        } else if (key == "outputs") {
            for (std::string_view item : split_list(value)) {
                const auto it = std::find_if(std::begin(kOutputs), std::end(kOutputs),
                                             [&](Output o) { return output_name(o) == item; });
                if (it == std::end(kOutputs)) {
                    throw ParseError(line, "unknown output '" + std::string(item) +
                                               "'; supported: boundary, bonus_profile, psor_verify");
                }
                sc.outputs.push_back(*it);
            }
        } else if (key == "tolerance") {
            sc.tolerance = parse_double(value, line, key);
        } else if (key.rfind("psor.", 0) == 0) {
            if (!sc.psor) sc.psor = PsorConfig{};
            apply_psor_key(*sc.psor, std::string_view(key).substr(5), value, line);
        } else {
            throw ParseError(line, "unknown key '" + key + "'");
        }
    }

    if (kind_text.empty()) throw ParseError(sec.first_line, "scenario '" + sc.id + "' has no kind");
    if (!have_r || !have_q || !have_sigma) {
        throw ParseError(sec.first_line, "scenario '" + sc.id + "' needs r, q and sigma");
    }

    auto single_strike = [&]() {
        if (strikes.size() != 1) throw ParseError(strikes_line, "kind " + kind_text + " takes exactly one strike");
        return strikes.front();
    };

    try {
        sc.params.validate();
        if (kind_text == "condor") {
            if (strikes.size() != 4) throw ParseError(strikes_line, "condor takes four strikes");
            if (!weights.empty()) throw ParseError(kind_line, "condor fixes its weights; use kind = strategy");
            sc.spec = make_condor(strikes[0], strikes[1], strikes[2], strikes[3], expiry);
        } else {
            const auto kind = parse_kind(kind_text);
            if (!kind) {
                throw ParseError(kind_line, "unknown kind '" + kind_text + "'; supported kinds: " + supported_kinds());
            }
            switch (*kind) {
                case Kind::VanillaCall:
                case Kind::VanillaPut:
                    sc.spec = make_vanilla(*kind == Kind::VanillaCall ? OptionType::Call : OptionType::Put,
                                           single_strike(), expiry);
                    break;
                case Kind::Strategy: {
                    if (strikes.empty() || weights.size() != strikes.size()) {
                        throw ParseError(strikes_line, "strategy needs matching strikes and weights lists");
                    }
                    std::vector<Leg> legs;
                    for (std::size_t i = 0; i < strikes.size(); ++i) legs.push_back({weights[i], strikes[i]});
                    sc.spec = make_strategy(std::move(legs), expiry);
                    break;
                }
                case Kind::AsianCall:
                case Kind::AsianPut:
                    sc.spec = make_asian(*kind == Kind::AsianCall ? OptionType::Call : OptionType::Put,
                                         AveragingSpec::weighted(p, lambda), expiry);
                    break;
                case Kind::LookbackCall:
                case Kind::LookbackPut:
                    sc.spec = make_lookback(*kind == Kind::LookbackCall ? OptionType::Call : OptionType::Put, expiry);
                    break;
                case Kind::ShoutCall:
                case Kind::ShoutPut:
                    sc.spec = make_shout(*kind == Kind::ShoutCall ? OptionType::Call : OptionType::Put,
                                         single_strike(), expiry);
                    break;
                case Kind::BritishCall:
                case Kind::BritishPut:
                    sc.spec = make_british(*kind == Kind::BritishCall ? OptionType::Call : OptionType::Put, mu_c,
                                           single_strike(), expiry);
                    break;
            }
        }
        if (sc.psor) sc.psor->validate();
        if (sc.tolerance && !(*sc.tolerance > 0.0)) throw InvalidSpec("tolerance must be positive");
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(sec.first_line, "scenario '" + sc.id + "': " + e.what());
    }
    return sc;
}

void write_psor(std::ostringstream& os, const PsorConfig& c) {
    os << "psor.n_time = " << c.n_time << '\n'
       << "psor.n_space = " << c.n_space << '\n'
       << "psor.lo = " << format_double(c.lo) << '\n'
       << "psor.hi = " << format_double(c.hi) << '\n'
       << "psor.omega = " << format_double(c.omega) << '\n'
       << "psor.tol = " << format_double(c.tol) << '\n'
       << "psor.T = " << format_double(c.expiry) << '\n'
       << "psor.theta = " << format_double(c.theta) << '\n'
       << "psor.coordinate = " << (c.coordinate == Coordinate::LogSpot ? "log" : "raw") << '\n';
    if (c.reference) os << "psor.reference = " << format_double(*c.reference) << '\n';
    os << "psor.auto_widen = " << (c.auto_widen ? "true" : "false") << '\n'
       << "psor.widen_margin = " << format_double(c.widen_margin) << '\n'
       << "psor.max_sweeps = " << c.max_sweeps << '\n'
       << "psor.min_island_nodes = " << c.min_island_nodes << '\n';
    if (c.detection_slack) os << "psor.detection_slack = " << format_double(*c.detection_slack) << '\n';
}

}  // namespace

std::string_view output_name(Output o) noexcept {
    switch (o) {
        case Output::Boundary: return "boundary";
        case Output::BonusProfile: return "bonus_profile";
        case Output::PsorVerify: return "psor_verify";
    }
    return "unknown";
}

bool Scenario::wants(Output o) const noexcept {
    return outputs.empty() || std::find(outputs.begin(), outputs.end(), o) != outputs.end();
}

ParseError::ParseError(int line, const std::string& what)
    : InvalidSpec(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

std::vector<Scenario> parse_scenarios(std::string_view text) {
    std::vector<Section> sections;
    Section current;
    int line_no = 0;
    auto flush = [&]() {
        if (!current.entries.empty()) sections.push_back(std::move(current));
        current = Section{};
    };

    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view raw = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        ++line_no;

        const auto hash = raw.find('#');
        if (hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string_view line = trim(raw);
        if (line.empty()) {
            // Comment-only lines do not end a section; truly blank ones do.
            if (hash == std::string_view::npos) flush();
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ParseError(line_no, "expected key = value");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ParseError(line_no, "empty key");
        if (current.entries.empty()) current.first_line = line_no;
        current.entries.push_back({key, {value, line_no}});
    }
    flush();

    std::vector<Scenario> out;
    std::set<std::string> ids;
    for (std::size_t i = 0; i < sections.size(); ++i) {
        Scenario sc = build_scenario(sections[i], i);
        if (!ids.insert(sc.id).second) throw ParseError(sections[i].first_line, "duplicate id '" + sc.id + "'");
        out.push_back(std::move(sc));
    }
    return out;
}

std::vector<Scenario> load_scenarios(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(0, "cannot read scenario file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenarios(buf.str());
}

std::string write_scenarios(const std::vector<Scenario>& scenarios) {
    std::ostringstream os;
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const Scenario& sc = scenarios[i];
        const DerivativeSpec& s = sc.spec;
        if (i > 0) os << '\n';
        os << "id = " << sc.id << '\n';
        if (is_condor(s)) {
            os << "kind = condor\n";
        } else {
            os << "kind = " << kind_name(s.kind) << '\n';
        }
        os << "r = " << format_double(sc.params.r) << '\n'
           << "q = " << format_double(sc.params.q) << '\n'
           << "sigma = " << format_double(sc.params.sigma) << '\n';
        if (s.kind == Kind::Strategy) {
            os << "strikes = ";
            for (std::size_t k = 0; k < s.legs.size(); ++k) os << (k ? ", " : "") << format_double(s.legs[k].strike);
            os << '\n';
            if (!is_condor(s)) {
                os << "weights = ";
                for (std::size_t k = 0; k < s.legs.size(); ++k) {
                    os << (k ? ", " : "") << format_double(s.legs[k].weight);
                }
                os << '\n';
            }
        } else if (!s.path_dependent()) {
            os << "strikes = " << format_double(s.strike) << '\n';
        }
        os << "T = " << format_double(s.expiry) << '\n';
        if (s.kind == Kind::AsianCall || s.kind == Kind::AsianPut) {
            os << "p = " << format_double(s.avg.p) << '\n' << "lambda = " << format_double(s.avg.lambda) << '\n';
        }
        if (s.kind == Kind::BritishCall || s.kind == Kind::BritishPut) os << "mu_c = " << format_double(s.mu_c) << '\n';
        if (!sc.outputs.empty()) {
            os << "outputs = ";
            for (std::size_t k = 0; k < sc.outputs.size(); ++k) os << (k ? ", " : "") << output_name(sc.outputs[k]);
            os << '\n';
        }
        if (sc.tolerance) os << "tolerance = " << format_double(*sc.tolerance) << '\n';
        if (sc.psor) write_psor(os, *sc.psor);
    }
    return os.str();
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

std::string format_csv(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace eeb
