#include "censmix/basis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "censmix/linalg.hpp"

namespace censmix {
namespace {

template <class Real>
std::vector<Real> build_entries(int ell, const CensorWindow& w) {
    std::vector<Real> entries(static_cast<size_t>(ell) * static_cast<size_t>(ell));
    for (int r = 0; r < ell; ++r)
        for (int c = 0; c < ell; ++c)
            entries[static_cast<size_t>(r) * static_cast<size_t>(ell) + static_cast<size_t>(c)] =
                compute_J_t<Real>(c, r, w);
    return entries;
}

std::string window_str(const CensorWindow& w) {
    std::ostringstream os;
    os << "[" << w.lower << ", " << w.upper << "]";
    return os.str();
}

// Solve V beta_i = e_i for i = 0..2k-1 from one factorization; returns false
// if any residual violates the contract or a pivot collapses.
template <class Real>
bool try_solve(int ell, int k, const std::vector<Real>& entries,
               std::vector<std::vector<Real>>& betas, std::vector<Real>& residuals) {
    using std::abs;
    DenseLU<Real> lu(ell, entries);
    if (lu.min_pivot() < Real(1e-300)) return false;
    const int n_rhs = 2 * k;
    betas.assign(static_cast<size_t>(n_rhs), {});
    residuals.assign(static_cast<size_t>(n_rhs), Real(0));
    std::vector<Real> e(static_cast<size_t>(ell), Real(0));
    bool ok = true;
    for (int i = 0; i < n_rhs; ++i) {
        e[static_cast<size_t>(i)] = 1;
        auto beta = lu.solve(e);
        e[static_cast<size_t>(i)] = 0;
        // residual V beta - e_i in the working precision
        Real res = 0;
        Real beta_norm = 0;
        for (int r = 0; r < ell; ++r) {
            Real acc = 0;
            for (int c = 0; c < ell; ++c)
                acc += entries[static_cast<size_t>(r) * static_cast<size_t>(ell) + static_cast<size_t>(c)] *
                       beta[static_cast<size_t>(c)];
            if (r == i) acc -= 1;
            res = std::max(res, Real(abs(acc)));
        }
        for (const auto& v : beta) beta_norm = std::max(beta_norm, Real(abs(v)));
        residuals[static_cast<size_t>(i)] = res;
        if (!(res <= Real(kResidualTolerance) * beta_norm)) ok = false;
        betas[static_cast<size_t>(i)] = std::move(beta);
    }
    return ok;
}

}  // namespace

BasisMatrix build_V(int ell, const CensorWindow& w) {
    if (ell < 1) throw ConfigError("build_V: ell must be >= 1");
    BasisMatrix V;
    V.ell = ell;
    V.window = w;
    const auto big = build_entries<BigFloat>(ell, w);
    V.entries.resize(big.size());
    std::transform(big.begin(), big.end(), V.entries.begin(),
                   [](const BigFloat& v) { return v.convert_to<double>(); });
    DenseLU<double> lu(ell, V.entries);
    if (lu.min_pivot() <= 0) {
        V.condition_estimate = std::numeric_limits<double>::infinity();
    } else {
        V.condition_estimate = matrix_one_norm(ell, V.entries) * matrix_one_norm(ell, lu.inverse());
    }
    return V;
}

EstimatorBasis solve_basis(const BasisMatrix& V, int k) {
    if (k < 1) throw ConfigError("solve_basis: k must be >= 1");
    if (V.ell < 2 * (2 * k - 1))
        throw ConfigError("solve_basis: ell = " + std::to_string(V.ell) +
                          " violates ell >= 2(2k-1) = " + std::to_string(2 * (2 * k - 1)));

    EstimatorBasis basis;
    basis.ell = V.ell;
    basis.k = k;
    basis.window = V.window;

    if (V.ell <= kDoublePrecisionEllLimit) {
        std::vector<std::vector<double>> betas;
        std::vector<double> residuals;
        if (try_solve<double>(V.ell, k, V.entries, betas, residuals)) {
            basis.betas = std::move(betas);
            basis.residual_norms = std::move(residuals);
            return basis;
        }
    }

    // Extended-precision path: rebuild V from scratch and retry.
    const auto big_entries = build_entries<BigFloat>(V.ell, V.window);
    std::vector<std::vector<BigFloat>> betas;
    std::vector<BigFloat> residuals;
    if (!try_solve<BigFloat>(V.ell, k, big_entries, betas, residuals)) {
        throw IllConditioningError("solve_basis: V is numerically singular at ell = " +
                                   std::to_string(V.ell) + ", window " + window_str(V.window));
    }
    basis.extended_precision = true;
    basis.betas.resize(betas.size());
    for (size_t i = 0; i < betas.size(); ++i) {
        basis.betas[i].resize(betas[i].size());
        std::transform(betas[i].begin(), betas[i].end(), basis.betas[i].begin(),
                       [](const BigFloat& v) { return v.convert_to<double>(); });
    }
    basis.residual_norms.resize(residuals.size());
    std::transform(residuals.begin(), residuals.end(), basis.residual_norms.begin(),
                   [](const BigFloat& v) { return v.convert_to<double>(); });
    return basis;
}

double determinant(const BasisMatrix& V) {
    return DenseLU<double>(V.ell, V.entries).determinant();
}

TailBiasReport tail_bias(const EstimatorBasis& basis, double M, int j_max) {
    if (!(M > 0)) throw ConfigError("tail_bias: M must be positive");
    if (j_max < basis.ell) throw ConfigError("tail_bias: j_max must be >= ell");

    TailBiasReport report;
    report.j_max = j_max;
    // J_{h_a,j} for a < ell, j in [ell, j_max], extended precision.
    const int ell = basis.ell;
    std::vector<std::vector<BigFloat>> j_table(static_cast<size_t>(j_max - ell + 1));
    for (int j = ell; j <= j_max; ++j) {
        auto& row = j_table[static_cast<size_t>(j - ell)];
        row.resize(static_cast<size_t>(ell));
        for (int a = 0; a < ell; ++a) row[static_cast<size_t>(a)] = compute_J_t<BigFloat>(a, j, basis.window);
    }

    for (const auto& beta : basis.betas) {
        TailBiasRow row;
        row.tail_coeffs.reserve(static_cast<size_t>(j_max - ell + 1));
        BigFloat bound = 0;
        BigFloat m_pow = pow(BigFloat(M), ell);
        for (int j = ell; j <= j_max; ++j) {
            BigFloat coeff = 0;
            for (int a = 0; a < ell; ++a)
                coeff += BigFloat(beta[static_cast<size_t>(a)]) * j_table[static_cast<size_t>(j - ell)][static_cast<size_t>(a)];
            row.tail_coeffs.push_back(coeff.convert_to<double>());
            bound += abs(coeff) * m_pow;
            m_pow *= M;
        }
        row.bias_bound = bound.convert_to<double>();
        report.rows.push_back(std::move(row));
    }
    return report;
}

int default_ell(int k, double epsilon) {
    if (!(epsilon > 0) || !(epsilon < 1)) return 2 * (2 * k - 1) + 2;
    const int floor_ell = 2 * (2 * k - 1) + 2;
    const int policy = static_cast<int>(std::ceil(3.0 * k * std::log(1.0 / epsilon)));
    return std::max(floor_ell, policy);
}

}  // namespace censmix
