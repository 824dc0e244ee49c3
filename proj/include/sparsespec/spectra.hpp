// Eigenvalue machinery: dense full spectra at small n, Krylov extremal
// eigenpairs at large n, and tridiagonalization around a vertex.
#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "sparsespec/operators.hpp"

namespace sparsespec {

struct SpectrumResult {
    std::vector<double> eigenvalues;   // nonincreasing
    std::vector<Vec> eigenvectors;     // parallel to eigenvalues when requested
    std::vector<double> residuals;     // ‖M v - λ v‖ per returned pair
    std::vector<bool> converged;       // per pair (always true for dense solves)
};

enum class Side { top, bottom, both };

// All n eigenvalues via a dense symmetric solve; n capped.
SpectrumResult full_spectrum(const LinearOperator& op, bool want_vectors = false,
                             std::int64_t cap = 2000);
SpectrumResult full_spectrum_dense(const Mat& m, bool want_vectors = false);

// Lanczos with full reorthogonalization, seeded start vector on the sphere.
// Non-convergence after max_iter is reported per pair, not fatal.
SpectrumResult extremal_eigs(const LinearOperator& op, int k, Side side,
                             double tol = 1e-10, int max_iter = 400,
                             std::uint64_t seed = 1);

// Jacobi-matrix data of the Krylov recursion g_0 = 1_x, g_{i+1} = Q_i X g_i.
struct TridiagonalForm {
    std::vector<double> diag;        // M_00 .. M_mm
    std::vector<double> offdiag;     // M_01 .. M_{m-1,m}
    std::vector<double> basis_norms; // ‖g_0‖ .. ‖g_m‖
    int m = 0;                       // Krylov steps completed
    std::int32_t center = 0;
    bool exhausted = false;          // Krylov space ended before the requested r
    std::vector<Vec> basis;          // g_i, kept only when requested

    Mat dense() const;               // the (m+1)x(m+1) tridiagonal block
};

TridiagonalForm tridiagonalize(const LinearOperator& op, std::int32_t x, int r,
                               bool keep_basis = false);

// True iff the diagonal vanishes relative to the offdiagonal scale; holds
// whenever the relevant ball is bipartite.
bool bipartite_diag_check(const TridiagonalForm& form);

// CSV dump: (index, eigenvalue, residual).
void write_spectrum_csv(const SpectrumResult& s, const std::string& path);

} // namespace sparsespec
