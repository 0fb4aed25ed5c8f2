#include "censmix/gauss_moments.hpp"

namespace censmix {

double window_moment(int n, const CensorWindow& w) {
    if (n < 0) throw ConfigError("window_moment: n must be nonnegative");
    const auto g = window_moment_table<BigFloat>(n, w);
    return g[static_cast<size_t>(n)].convert_to<double>();
}

double compute_J(int c, int r, const CensorWindow& w) {
    return compute_J_t<BigFloat>(c, r, w).convert_to<double>();
}

}  // namespace censmix
