#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eeb/error.hpp"
#include "eeb/market.hpp"
#include "eeb/psor.hpp"

namespace eeb {

enum class Output { Boundary, BonusProfile, PsorVerify };

std::string_view output_name(Output o) noexcept;

/// One section of a scenario file.
///
///   # comment
///   id = row1
///   kind = condor            (any kind_name, or condor / strategy)
///   r = 0.03
///   q = 0.02
///   sigma = 0.3
///   strikes = 1, 3, 4, 5
///   weights = 1, -1, -1, 1   (strategy only)
///   T = 1
///   p = inf                  (Asian; inf and -inf allowed)
///   lambda = 0
///   mu_c = 0                 (British)
///   outputs = boundary, psor_verify
///   tolerance = 5e-4
///   psor.n_space = 4000      (any PsorConfig field)
///
/// Sections are separated by blank lines.
struct Scenario {
    std::string id;
    DerivativeSpec spec;
    MarketParams params;
    std::optional<PsorConfig> psor;
    std::vector<Output> outputs;  // empty: every verb applies
    std::optional<double> tolerance;

    bool wants(Output o) const noexcept;
    bool operator==(const Scenario&) const = default;
};

/// Malformed scenario input; line() is 1-based (0 when not tied to a line).
class ParseError : public InvalidSpec {
public:
    ParseError(int line, const std::string& what);
    int line() const noexcept { return line_; }

private:
    int line_;
};

std::vector<Scenario> parse_scenarios(std::string_view text);
std::vector<Scenario> load_scenarios(const std::filesystem::path& path);

/// Canonical text form; parse_scenarios(write_scenarios(s)) == s.
std::string write_scenarios(const std::vector<Scenario>& scenarios);

/// Shortest decimal that round-trips, with inf / -inf spelled out.
std::string format_double(double v);

/// printf "%.12g": the fixed format used in every CSV.
std::string format_csv(double v);

}  // namespace eeb
