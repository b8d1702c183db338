#include "subforge/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace subforge {

double log_base(LogBase base, double v) {
    return base == LogBase::two ? std::log2(v) : std::log(v);
}

int ball_radius_m(int n, double d, LogBase base) {
    if (n <= 0 || d <= 0)
        throw std::invalid_argument("ball_radius_m: need n, d > 0");
    double ratio = static_cast<double>(n) / d;
    if (ratio < 1.0)
        ratio = 1.0;
    double lg = log_base(base, ratio);
    double target = lg * lg * lg * lg;
    long long m = static_cast<long long>(std::floor(target)) + 1;
    if (m % 2 != 0)
        ++m;
    if (m < 2)
        m = 2;
    if (m > 1'000'000'000)
        m = 1'000'000'000;
    return static_cast<int>(m);
}

int effective_m(const RunConfig &cfg, int n, double d) {
    if (cfg.m_override)
        return std::max(2, *cfg.m_override);
    int formula = ball_radius_m(n, d, cfg.log_base);
    int cap = cfg.m_cap % 2 == 0 ? cfg.m_cap : cfg.m_cap + 1;
    return std::max(2, std::min(formula, cap));
}

std::string RunConfig::str() const {
    std::ostringstream os;
    os << "eps0=" << eps0 << " eps1=" << eps1 << " eps2=" << eps2 << " c0=" << c0 << " s=" << s
       << " x=" << x << " y=" << y << " z=" << z << " C=" << slack_C << " K=" << slack_K
       << " log_base=" << (log_base == LogBase::two ? "2" : "e") << " seed=" << seed;
    if (m_override)
        os << " m_override=" << *m_override;
    return os.str();
}

namespace {

void check(bool ok, const std::string &msg) {
    if (!ok)
        throw std::invalid_argument("config: " + msg);
}

} // namespace

RunConfig parse_config(const std::string &text) {
    RunConfig cfg;
    std::map<std::string, std::function<void(const std::string &)>> setters;
    auto real = [&](const std::string &key, double &slot, double lo, double hi) {
        setters[key] = [&slot, key, lo, hi](const std::string &v) {
            std::size_t pos = 0;
            double parsed = std::stod(v, &pos);
            check(pos == v.size(), "bad real for " + key + ": " + v);
            check(parsed >= lo && parsed <= hi, key + " out of range [" + std::to_string(lo) +
                                                    "," + std::to_string(hi) + "]: " + v);
            slot = parsed;
        };
    };
    auto integer = [&](const std::string &key, int &slot, long long lo, long long hi) {
        setters[key] = [&slot, key, lo, hi](const std::string &v) {
            std::size_t pos = 0;
            long long parsed = std::stoll(v, &pos);
            check(pos == v.size(), "bad integer for " + key + ": " + v);
            check(parsed >= lo && parsed <= hi, key + " out of range: " + v);
            slot = static_cast<int>(parsed);
        };
    };
    real("eps0", cfg.eps0, 1e-9, 1.0);
    real("eps1", cfg.eps1, 1e-9, 0.125);
    real("eps2", cfg.eps2, 1e-9, 1.0);
    real("c0", cfg.c0, 1e-9, 1.0);
    real("C", cfg.slack_C, 1e-9, 1e18);
    real("K", cfg.slack_K, 1e-9, 1e18);
    real("large_degree_fraction", cfg.large_degree_fraction, 0.0, 1.0);
    integer("s", cfg.s, 1, 1'000'000);
    integer("x", cfg.x, 1, 1'000'000);
    integer("y", cfg.y, 1, 1'000'000);
    integer("z", cfg.z, 1, 1'000'000);
    integer("exact_cap", cfg.exact_cap, 1, 24);
    integer("sample_trials", cfg.sample_trials, 0, 100'000'000);
    integer("m_cap", cfg.m_cap, 2, 1'000'000);
    integer("desk_expansion", cfg.desk_expansion, 1, 1'000'000);
    integer("desk_adjuster_k", cfg.desk_adjuster_k, 1, 1'000);
    integer("bounded_maxlen_factor", cfg.bounded_maxlen_factor, 1, 1'000'000);
    integer("ell_search_cap", cfg.ell_search_cap, 1, 1'000'000);
    setters["search_budget"] = [&cfg](const std::string &v) {
        std::size_t pos = 0;
        long long parsed = std::stoll(v, &pos);
        check(pos == v.size() && parsed >= 0, "bad search_budget: " + v);
        cfg.search_budget = parsed;
    };
    setters["seed"] = [&cfg](const std::string &v) {
        std::size_t pos = 0;
        unsigned long long parsed = std::stoull(v, &pos);
        check(pos == v.size(), "bad seed: " + v);
        cfg.seed = parsed;
    };
    setters["m_override"] = [&cfg](const std::string &v) {
        std::size_t pos = 0;
        long long parsed = std::stoll(v, &pos);
        check(pos == v.size() && parsed >= 1 && parsed <= 1'000'000'000, "bad m_override: " + v);
        cfg.m_override = static_cast<int>(parsed);
    };
    auto opt_real = [&](const std::string &key, std::optional<double> &slot) {
        setters[key] = [&slot, key](const std::string &v) {
            std::size_t pos = 0;
            double parsed = std::stod(v, &pos);
            check(pos == v.size() && parsed >= 0.0, "bad real for " + key + ": " + v);
            slot = parsed;
        };
    };
    opt_real("split_large_thresh", cfg.split_large_thresh);
    opt_real("split_small_thresh", cfg.split_small_thresh);
    setters["log_base"] = [&cfg](const std::string &v) {
        if (v == "2")
            cfg.log_base = LogBase::two;
        else if (v == "e")
            cfg.log_base = LogBase::e;
        else
            check(false, "log_base must be 2 or e, got " + v);
    };

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        auto eq = line.find('=');
        check(eq != std::string::npos, "line " + std::to_string(lineno) + " is not key=value");
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        auto strip = [](std::string s) {
            auto a = s.find_first_not_of(" \t");
            auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        key = strip(key);
        value = strip(value);
        auto it = setters.find(key);
        check(it != setters.end(), "unknown key '" + key + "'");
        try {
            it->second(value);
        } catch (const std::invalid_argument &) {
            throw;
        } catch (const std::exception &) {
            check(false, "bad value for " + key + ": " + value);
        }
    }
    check(cfg.s >= 8 * cfg.x && cfg.s >= cfg.y,
          "exponent hierarchy violated: need s >= max(8x, y)");
    check(cfg.x > cfg.y && cfg.y > cfg.z, "exponent hierarchy violated: need x > y > z");
    return cfg;
}

RunConfig load_config(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace subforge
