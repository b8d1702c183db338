#pragma once

#include "subforge/config.hpp"

#include <stdexcept>

namespace subforge {

/// Parameters of the sublinear expansion condition: every X with
/// k/2 <= |X| <= n/2 must satisfy |N(X)| >= rho(|X|) * |X|.
struct ExpanderParams {
    double eps1 = 0.125;
    double eps2 = 0.1;
    double k = 2.0; // expansion floor, e.g. eps2 * d
    LogBase base = LogBase::two;

    void validate() const {
        if (!(eps1 > 0.0) || eps1 > 0.125 + 1e-12)
            throw std::invalid_argument("ExpanderParams: eps1 must lie in (0, 1/8]");
        if (!(k > 0.0))
            throw std::invalid_argument("ExpanderParams: k must be positive");
    }

    /// Convenience: the degree parameter d with k = eps2 * d.
    double degree_floor() const { return k / eps2; }
};

/// rho(x) = 0 below k/5, eps1 / log_b^2(15 x / k) at and above.
double rho(double xsize, const ExpanderParams &p);

} // namespace subforge
