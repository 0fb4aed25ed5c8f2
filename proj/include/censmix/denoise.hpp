#pragma once

#include <vector>

#include "censmix/model.hpp"

namespace censmix {

// Hankel pair for the semidefinite sandwich: A = M_{0,2k-2} (m_0 = 1 in the
// corner), B = M_{1,2k-1}. Row-major k x k.
struct HankelPair {
    int k = 0;
    std::vector<double> A;
    std::vector<double> B;

    double a(int r, int c) const { return A[static_cast<size_t>(r) * static_cast<size_t>(k) + static_cast<size_t>(c)]; }
    double b(int r, int c) const { return B[static_cast<size_t>(r) * static_cast<size_t>(k) + static_cast<size_t>(c)]; }
};

struct ProjectionDiagnostics {
    bool input_feasible = false;
    int iterations = 0;
    double moved_distance = 0.0;
};

struct WeightDiagnostics {
    double clipped_mass = 0.0;       // total negative mass clipped to zero
    bool negative_warning = false;   // a weight below -1e-8 was clipped
};

struct DenoiseResult {
    std::vector<double> weights;
    std::vector<double> means;  // standardized frame, sorted ascending
    MomentVector projected;
    ProjectionDiagnostics projection;
    WeightDiagnostics weight_diag;
};

HankelPair build_hankel(const MomentVector& m, int k);

// True iff  M*A - B >= -tol  and  B + M*A >= -tol  (min eigenvalue sense).
bool check_feasible(const HankelPair& h, double M, double tol);

// Euclidean projection of m_hat onto the sandwich-feasible moment set,
// computed by Dykstra alternating projections between the two spectral
// half-spaces; each half-space projection runs a dual eigen-step iteration
// (PSD clip, then contraction back over Hankel anti-diagonals).
MomentVector project_moments(const MomentVector& m_hat, int k, double M,
                             ProjectionDiagnostics* diag = nullptr);

// Roots of the (k+1)x(k+1) moment determinant polynomial, via cofactor
// expansion along the last row and companion-matrix eigenvalues. Sorted
// ascending, clipped to [-M, M].
std::vector<double> find_means(const MomentVector& m_star, int k, double M);

// Vandermonde solve for the weights; tiny negatives clipped, renormalized.
std::vector<double> solve_weights(const std::vector<double>& means, const MomentVector& m_star,
                                  WeightDiagnostics* diag = nullptr);

// Algorithm steps composed: project -> roots -> weights.
DenoiseResult denoise(const MomentVector& m_hat, int k, double M);

inline constexpr double kFeasibilityTol = 1e-9;
inline constexpr double kRootMergeTol = 1e-7;
inline constexpr int kProjectionBudget = 100000;

}  // namespace censmix
