#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace subforge {

enum class LogBase { two, e };

/// All tunable constants in one place. The headline parameters follow the
/// usual expander/gadget hierarchy; the desk_* knobs size gadgets and search
/// budgets for hosts small enough to experiment on, where the asymptotic
/// choices (m = log^4(n/d), ell = m^3, D = 1e-7*d*m^y, ...) are far beyond
/// any feasible graph. Theoretical values are still computed and logged for
/// comparison wherever a desk value substitutes for one.
struct RunConfig {
    double eps0 = 0.25;
    double eps1 = 0.125;
    double eps2 = 0.1;
    double c0 = 0.05;
    int s = 1600;
    int x = 50;
    int y = 12;
    int z = 4;
    double slack_C = 64.0;
    double slack_K = 4.0;
    LogBase log_base = LogBase::two;
    std::uint64_t seed = 0;
    std::optional<int> m_override;

    // Verification scale.
    int exact_cap = 18;          // exhaustive expansion check up to this n
    int sample_trials = 10000;   // sampled expansion refutation search
    long long search_budget = 1'000'000; // exact-length path search expansions

    // Desk-scale gadget/orchestration knobs.
    int m_cap = 6;               // even cap applied to log^4(n/d) by orchestrators
    int desk_expansion = 6;      // D for adjuster ends / expansions
    int desk_adjuster_k = 3;     // ladder width used per connection
    int bounded_maxlen_factor = 13; // bounded-mode path cap, in units of m
    double large_degree_fraction = 0.5; // L_G threshold as fraction of max degree
    int ell_search_cap = 24;     // balanced mode tries path lengths up to this
    // Degree-class thresholds over the pattern; defaults are the d/m^10 and
    // m^4 (balanced) / m^2 (bounded) formulas unless overridden.
    std::optional<double> split_large_thresh;
    std::optional<double> split_small_thresh;

    std::string str() const;
};

/// Parse key=value config text ('#' comments allowed). Unknown keys and
/// out-of-range values are rejected.
RunConfig parse_config(const std::string &text);
RunConfig load_config(const std::string &path);

/// m = smallest even integer strictly greater than log_b^4(n/d).
int ball_radius_m(int n, double d, LogBase base);

/// Desk-effective m: the override when set, otherwise min(formula, m_cap)
/// rounded up to even.
int effective_m(const RunConfig &cfg, int n, double d);

double log_base(LogBase base, double v);

} // namespace subforge
