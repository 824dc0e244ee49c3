// Nonbacktracking matrix B of d^{-1/2} A̅ on ordered vertex pairs, its
// spectral-radius estimate, and the Ihara-Bass pencil M(t) - A̅(t).
#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "sparsespec/operators.hpp"

namespace sparsespec {

// Acts on vectors indexed by [N]²; pair (x,y) stored flat at x*n + y.
class NbtOperator {
public:
    explicit NbtOperator(const CenteredOperator& base, std::int64_t cap = 4000);

    std::int64_t n() const { return n_; }
    std::int64_t pair_count() const { return n_ * n_; }
    const CenteredOperator& base() const { return *base_; }

    // (Bw)_(x,y) = d^{-1/2} [ Σ_v A̅_{yv} w_(y,v) - A̅_{yx} w_(y,x) ]
    void apply(const Vec& w, Vec& out) const;
    Vec apply(const Vec& w) const;

    // Dense N² x N² materialization for oracles (small n only).
    Mat dense(std::int64_t cap = 40) const;

private:
    const CenteredOperator* base_;
    std::int64_t n_;
};

Vec nbt_matvec(const NbtOperator& op, const Vec& w);

struct NbtRadiusEstimate {
    double estimate = 0.0;    // geometric mean of the last 10 growth ratios
    int iterations = 0;
    bool flagged_nonnormal = true;  // always an estimate: B is non-normal
};

// Power iteration with renormalization every `stride` applications; each
// recorded growth ratio is the per-step geometric rate over one period and
// the estimate is the geometric mean of the last 10 of them. stride > 1
// damps the limit-cycle oscillation when the dominant eigenvalue of B is a
// complex pair (the per-step ratio sequence then never settles).
NbtRadiusEstimate spectral_radius_nbt(const NbtOperator& op, int iters, std::uint64_t seed,
                                      int stride = 1);

struct IharaBassPair {
    double t = 0.0;
    Mat a_t;                 // A̅(t)
    Vec m_t;                 // diagonal of M(t)
    double det_value = 0.0;  // det(M(t) - A̅(t))
    double min_eig = 0.0;
};

// Dense A̅(t), M(t), det and min eigenvalue of the pencil. Errors when t²
// collides with d^{-1} A̅_xy² (the formula's excluded set).
IharaBassPair ihara_bass_pair(const CenteredOperator& base, double t, std::int64_t cap = 2000);

// Real roots of t -> det(M(t) - A̅(t)) located by sign-change bisection
// over [t_min, t_max] on a uniform grid.
std::vector<double> ihara_bass_roots(const CenteredOperator& base, double t_min, double t_max,
                                     int grid, double tol = 1e-10);

struct QuadraticFormCheck {
    double lam_min_plus = 0.0;   // λ_min(I + D - A̅/sqrt(d))
    double lam_min_minus = 0.0;  // λ_min(I + D + A̅/sqrt(d))
    double bound = 0.0;          // C (d + D_max) / d^{3/2}
    double norm_bound_rhs = 0.0; // 1 + alpha_max + bound, for ‖A̅‖/sqrt(d)
};

QuadraticFormCheck quadratic_form_check(const CenteredOperator& base, double d,
                                        double envelope_c = 10.0, double tol = 1e-8,
                                        int max_iter = 600, std::uint64_t seed = 1);

// CSV sweep (t, det_value, min_eig).
void write_ihara_bass_csv(const CenteredOperator& base, double t_min, double t_max, int grid,
                          const std::string& path);

} // namespace sparsespec
