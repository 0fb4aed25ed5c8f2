#include "censmix/denoise.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace censmix {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// H(m)[r][c] = M*m_{r+c} + sign*m_{r+c+1} with m_0 = 1; m holds m_1..m_{2k-1}.
MatrixXd sandwich_matrix(const VectorXd& m, int k, double M, double sign) {
    MatrixXd H(k, k);
    auto moment = [&](int j) { return j == 0 ? 1.0 : m(j - 1); };
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) H(r, c) = M * moment(r + c) + sign * moment(r + c + 1);
    return H;
}

double min_eigenvalue(const MatrixXd& H) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(H);
    return es.eigenvalues().minCoeff();
}

// Adjoint of the affine map m -> H(m): contract a symmetric matrix over the
// Hankel anti-diagonals.
VectorXd sandwich_adjoint(const MatrixXd& L, int k, double M, double sign) {
    VectorXd g = VectorXd::Zero(2 * k - 1);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
            const int d = r + c;
            if (d >= 1) g(d - 1) += M * L(r, c);
            g(d) += sign * L(r, c);
        }
    return g;
}

MatrixXd psd_clip(const MatrixXd& X) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(X);
    VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

// Euclidean projection of y onto {m : H(m) >= 0} by projected gradient
// ascent on the dual multiplier (PSD clip + anti-diagonal contraction).
VectorXd project_half_space(const VectorXd& y, int k, double M, double sign) {
    if (min_eigenvalue(sandwich_matrix(y, k, M, sign)) >= 0.0) return y;
    const int dim = 2 * k - 1;
    // Lipschitz bound for the dual gradient: 1-norm of the Gram matrix of
    // the affine map's coefficient vectors.
    MatrixXd gram = MatrixXd::Zero(dim, dim);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
            VectorXd row = VectorXd::Zero(dim);
            const int d = r + c;
            if (d >= 1) row(d - 1) += M;
            row(d) += sign;
            gram += row * row.transpose();
        }
    const double step = 1.0 / gram.cwiseAbs().rowwise().sum().maxCoeff();

    MatrixXd lambda = MatrixXd::Zero(k, k);
    VectorXd m = y;
    for (int it = 0; it < 20000; ++it) {
        const MatrixXd H = sandwich_matrix(m, k, M, sign);
        lambda = psd_clip(lambda - step * H);
        const VectorXd m_next = y + sandwich_adjoint(lambda, k, M, sign);
        const double change = (m_next - m).lpNorm<Eigen::Infinity>();
        m = m_next;
        if (change < 1e-15 * (1.0 + m.lpNorm<Eigen::Infinity>()) &&
            min_eigenvalue(sandwich_matrix(m, k, M, sign)) > -1e-13)
            break;
    }
    return m;
}

VectorXd to_vec(const MomentVector& m) {
    VectorXd v(m.order);
    for (int j = 0; j < m.order; ++j) v(j) = m.values[static_cast<size_t>(j)];
    return v;
}

}  // namespace

HankelPair build_hankel(const MomentVector& m, int k) {
    if (k < 1) throw ConfigError("build_hankel: k must be >= 1");
    if (m.order < 2 * k - 1)
        throw ConfigError("build_hankel: moment vector of order " + std::to_string(m.order) +
                          " is too short for k = " + std::to_string(k));
    HankelPair h;
    h.k = k;
    h.A.resize(static_cast<size_t>(k) * static_cast<size_t>(k));
    h.B.resize(static_cast<size_t>(k) * static_cast<size_t>(k));
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
            h.A[static_cast<size_t>(r) * static_cast<size_t>(k) + static_cast<size_t>(c)] = m.m(r + c);
            h.B[static_cast<size_t>(r) * static_cast<size_t>(k) + static_cast<size_t>(c)] = m.m(r + c + 1);
        }
    return h;
}

bool check_feasible(const HankelPair& h, double M, double tol) {
    if (!(M > 0) || tol < 0) throw ConfigError("check_feasible: need M > 0 and tol >= 0");
    const int k = h.k;
    MatrixXd A(k, k), B(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
            A(r, c) = h.a(r, c);
            B(r, c) = h.b(r, c);
        }
    return min_eigenvalue(M * A - B) >= -tol && min_eigenvalue(B + M * A) >= -tol;
}

MomentVector project_moments(const MomentVector& m_hat, int k, double M,
                             ProjectionDiagnostics* diag) {
    if (!(M > 0)) throw ConfigError("project_moments: M must be positive");
    if (m_hat.order < 2 * k - 1) throw ConfigError("project_moments: moment vector too short");

    ProjectionDiagnostics local;
    MomentVector out = m_hat;
    if (check_feasible(build_hankel(m_hat, k), M, 1e-14)) {
        local.input_feasible = true;
        if (diag) *diag = local;
        return out;  // already feasible: returned unchanged
    }

    const VectorXd target = to_vec(m_hat);
    VectorXd x = target;
    VectorXd p = VectorXd::Zero(x.size());
    VectorXd q = VectorXd::Zero(x.size());
    int it = 0;
    double change = 0.0;
    for (; it < kProjectionBudget; ++it) {
        const VectorXd y = project_half_space(x + p, k, M, -1.0);  // M*A - B >= 0
        p = x + p - y;
        const VectorXd x_next = project_half_space(y + q, k, M, +1.0);  // B + M*A >= 0
        q = y + q - x_next;
        change = (x_next - x).lpNorm<Eigen::Infinity>();
        x = x_next;
        if (change < 1e-11) break;
    }
    for (int j = 0; j < x.size(); ++j) out.values[static_cast<size_t>(j)] = x(j);
    const bool feasible = check_feasible(build_hankel(out, k), M, kFeasibilityTol);
    if (!feasible) {
        const double infeas = std::min(min_eigenvalue(sandwich_matrix(x, k, M, -1.0)),
                                       min_eigenvalue(sandwich_matrix(x, k, M, 1.0)));
        throw ConvergenceError("project_moments: no convergence within iteration budget",
                               std::vector<double>(out.values.begin(), out.values.end()),
                               -infeas);
    }
    local.iterations = it + 1;
    local.moved_distance = (x - target).norm();
    if (diag) *diag = local;
    return out;
}

std::vector<double> find_means(const MomentVector& m_star, int k, double M) {
    if (m_star.order < 2 * k - 1) throw ConfigError("find_means: moment vector too short");
    // P(x) = det of the (k+1)x(k+1) matrix whose top k rows are the moment
    // rows and whose last row is (1, x, ..., x^k). Cofactor expansion along
    // the last row: coefficient of x^c is (-1)^{k+c} times the minor.
    std::vector<double> coeffs(static_cast<size_t>(k) + 1);
    for (int c = 0; c <= k; ++c) {
        MatrixXd minor(k, k);
        for (int r = 0; r < k; ++r) {
            int col = 0;
            for (int cc = 0; cc <= k; ++cc) {
                if (cc == c) continue;
                minor(r, col++) = m_star.m(r + cc);
            }
        }
        const double det = k == 0 ? 1.0 : minor.partialPivLu().determinant();
        coeffs[static_cast<size_t>(c)] = ((k + c) % 2 == 0 ? 1.0 : -1.0) * det;
    }
    const double lead = coeffs.back();
    if (std::abs(lead) < 1e-12)
        throw DegenerateDeterminantError(
            "find_means: leading coefficient below 1e-12; fewer than k distinguishable atoms");

    std::vector<double> roots;
    if (k == 1) {
        // P(x) = lead*x + coeffs[0]
        roots.push_back(-coeffs[0] / lead);
    } else {
        MatrixXd companion = MatrixXd::Zero(k, k);
        for (int i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < k; ++i) companion(i, k - 1) = -coeffs[static_cast<size_t>(i)] / lead;
        Eigen::EigenSolver<MatrixXd> es(companion);
        for (int i = 0; i < k; ++i) roots.push_back(es.eigenvalues()(i).real());
    }
    for (double& r : roots) r = std::clamp(r, -M, M);
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<double> solve_weights(const std::vector<double>& means, const MomentVector& m_star,
                                  WeightDiagnostics* diag) {
    const int k = static_cast<int>(means.size());
    if (k < 1) throw ConfigError("solve_weights: need at least one mean");
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (std::abs(means[static_cast<size_t>(i)] - means[static_cast<size_t>(j)]) < kRootMergeTol)
                throw DegenerateSupportError(
                    "solve_weights: means closer than the merge tolerance; effective support "
                    "smaller than k");

    MatrixXd vand(k, k);
    VectorXd rhs(k);
    for (int c = 0; c < k; ++c) vand(0, c) = 1.0;
    for (int r = 1; r < k; ++r)
        for (int c = 0; c < k; ++c) vand(r, c) = vand(r - 1, c) * means[static_cast<size_t>(c)];
    for (int r = 0; r < k; ++r) rhs(r) = m_star.m(r);
    VectorXd w = vand.colPivHouseholderQr().solve(rhs);

    WeightDiagnostics local;
    double sum = 0.0;
    std::vector<double> weights(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) {
        double wi = w(i);
        if (wi < 0.0) {
            local.clipped_mass += -wi;
            if (wi < -1e-8) local.negative_warning = true;
            wi = 0.0;
        }
        weights[static_cast<size_t>(i)] = wi;
        sum += wi;
    }
    if (sum <= 0.0) throw DegenerateSupportError("solve_weights: all weights clipped to zero");
    for (double& wi : weights) wi /= sum;
    if (diag) *diag = local;
    return weights;
}

DenoiseResult denoise(const MomentVector& m_hat, int k, double M) {
    if (m_hat.order != 2 * k - 1)
        throw ConfigError("denoise: moment vector must have order 2k-1");
    DenoiseResult result;
    result.projected = project_moments(m_hat, k, M, &result.projection);
    result.means = find_means(result.projected, k, M);
    result.weights = solve_weights(result.means, result.projected, &result.weight_diag);
    return result;
}

}  // namespace censmix
