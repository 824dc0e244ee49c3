// Approximate eigenvectors around high-degree vertices: the coefficients u_i,
// v and v_-, the exact five-term error decomposition, and the sparse Wigner
// analogue built on the weighted spheres g_i.
#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "sparsespec/operators.hpp"

namespace sparsespec {

enum class Sign { plus, minus };

struct ApproxEigvector {
    std::int32_t center = 0;
    int radius = 0;                 // effective r (may be shrunk, see flag)
    bool radius_shrunk = false;     // an empty sphere forced a smaller r
    std::vector<double> coefficients;  // u_0 .. u_{r+1}; sum_{0..r} u_i² = 1
    Vec vector;                     // sparse support, returned dense length n
    Sign sign = Sign::plus;
    double predicted_eigenvalue = 0.0;  // ± sqrt(d) Lambda(alpha_x)
};

struct ErrorDecomposition {
    std::vector<double> norms;          // ‖w_0‖..‖w_4‖ (w_0 absent for Wigner)
    double reconstruction_residual = 0.0;  // ‖(A̅-λ)v - Σ w_k‖
    double total_residual = 0.0;           // ‖(A̅-λ)v‖
};

// r_x = floor(log N / (3 log D_x)); rejects D_x <= 1.
int r_x_radius(std::int64_t degree_x, std::int64_t n);

// u_0..u_{r+1} with u_1 = sqrt(D_x/(D_x-d)) u_0 and geometric continuation;
// normalized so that sum_{i=0..r} u_i² = 1. Requires D_x > d.
std::vector<double> coefficients_u(std::int64_t degree_x, double d, int r);

// v = Σ u_i s_i on the BFS spheres; sign=minus alternates (-1)^i u_i.
// shrink_on_empty_sphere: shrink r to the last nonempty sphere instead of
// erroring (experiment loops); otherwise an empty sphere raises.
ApproxEigvector build_v(const SparseGraph& g, std::int32_t x, int r, Sign sign,
                        bool shrink_on_empty_sphere = true);

// Exact decomposition (A̅ - sqrt(d) Lambda(alpha_x)) v = w_0 + ... + w_4.
ErrorDecomposition error_decomposition(const SparseGraph& g, std::int32_t x, int r,
                                       Sign sign = Sign::plus,
                                       bool shrink_on_empty_sphere = true);

// Wigner analogue: v = Σ u_i g_i/‖g_i‖ with g_0 = 1_x, g_i = (X g_{i-1})|_{S_i}.
ApproxEigvector build_v_wigner(const SparseWigner& x_op, std::int32_t x, int r, Sign sign,
                               double d, bool shrink_on_empty_sphere = true);

// Four-term exact reconstruction for the Wigner case (the w_0 analogue
// vanishes: the weights are centred).
ErrorDecomposition wigner_error_terms(const SparseWigner& x_op, std::int32_t x, int r,
                                      double d, Sign sign = Sign::plus,
                                      bool shrink_on_empty_sphere = true);

// Per-vertex report row used by the CLI and experiment loops.
struct ResidualRow {
    std::int32_t x;
    std::int64_t degree;
    double alpha;
    int r;
    std::vector<double> w_norms;
    double total_residual;
    double predicted_eigenvalue;
};

} // namespace sparsespec
