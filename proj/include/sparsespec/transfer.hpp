// Transfer-matrix analytics for the ideal tridiagonal M(alpha): the map
// Lambda and its inverse, gamma, the delta/gamma_>= perturbation quantities,
// the delocalization bound, and the section-7 parameter bundle.
#pragma once
#include <array>
#include <cstdint>
#include <optional>

#include "sparsespec/pruning.hpp"
#include "sparsespec/spectra.hpp"

namespace sparsespec {

// Lambda(t) = t / sqrt(t - 1); defined for t > 1, increasing on [2, ∞).
double lambda_fn(double t);

// Inverse of Lambda on [2, ∞): alpha(eta) = (eta/2)(eta + sqrt(eta² - 4)).
double alpha_fn(double eta);

// gamma(eta) = (eta - sign(eta) sqrt(eta² - 4)) / 2, |eta| > 2, |gamma| < 1.
double gamma_fn(double eta);

struct IdealTridiagonal {
    double alpha = 0.0;
    int r = 0;
    TridiagonalForm form;  // diag 0, offdiag (sqrt(alpha), 1, ..., 1)
};

IdealTridiagonal ideal_m(double alpha, int r);

// Normalized coefficients of Eq-style candidate eigenvector for M(alpha):
// u_1 = sqrt(alpha/(alpha-1)) u_0, geometric decay (alpha-1)^{-1/2} after.
std::vector<double> ideal_eigvec_u(double alpha, int r);

// One application of T(eta) = [[eta, -1], [1, 0]] to (u_{i+1}, u_i).
std::array<double, 2> transfer_step(double eta, const std::array<double, 2>& pair);

// The rational expression delta(m00, m01, m11, m12, eta); errors on resonance
// (vanishing denominator).
double delta_fn(double m00, double m01, double m11, double m12, double eta);

struct GammaGeqResult {
    double value = 0.0;
    bool condition_ok = false;  // eta² >= 4 + 4^5 (3+eta)² eps² (1 + 1∨δ²)/(1-γ²)²
};

GammaGeqResult gamma_geq_fn(double m00, double m01, double m11, double m12, double eta,
                            double eps);

struct DelocalizationBound {
    double bound = 0.0;   // on b_0² / ‖b‖²
    double eps = 0.0;
    double delta = 0.0;
    double gamma = 0.0;
    double gamma_geq = 0.0;
    bool condition_ok = false;
};

// Prop-style bound for a symmetric tridiagonal whose first rows are close to
// M(alpha); refuses (condition_ok=false, bound=inf) when the preconditions
// fail instead of crashing.
DelocalizationBound delocalization_bound(const TridiagonalForm& mt, double eta);

struct Section7Params {
    double omega = 0.0;
    double r_tau_omega = 0.0;
};

// omega solves mu = sqrt(d) (Lambda(omega) + zeta) on (2, ∞) by bisection;
// r_tau_omega = logN/(12 log(omega d)) ∧ (d/(4 log d) h((tau-1)/2) - 1) - 2.
Section7Params section7_params(double mu, double d, double tau, double zeta, std::int64_t n);

// Membership in W_{tau,mu,zeta}: alpha_x >= tau and mu >= sqrt(d)(Lambda(alpha_x ∨ 2) + zeta).
bool in_cal_w(double alpha_x, double tau, double mu, double zeta, double d);

// Error parameter E_{tau,k} = (3 sqrt(tau)+2)^k / sqrt(d) [(log d + logN/d)(1 + logN/(d tau))]^{1/2}.
double cal_e(double tau, int k, double d, std::int64_t n);

struct TridiagComparison {
    double op_norm_diff = 0.0;        // ‖M̂_{[r]} - sqrt(d) M(alpha_x)‖
    double cal_e_value = 0.0;         // E_{tau,r}
    std::vector<double> g_closeness;  // ‖g_k - 1_{S_k^{G_tau}}‖ / ‖1_{S_k^{G_tau}}‖
};

// Tridiagonalizes A̅_{tau,l} around x (l = rank of x in the degree order; with
// use_centered=false the plain pruned adjacency A_tau) and compares the
// leading block against sqrt(d) M(alpha_x). Pass a precomputed order when
// looping over many vertices.
TridiagComparison tridiag_comparison(const SparseGraph& g, const PrunedGraph& pruned,
                                     std::int32_t x, int r, double d, bool use_centered = true,
                                     const DegreeOrder* order = nullptr);

} // namespace sparsespec
