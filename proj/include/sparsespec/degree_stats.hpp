// Degree-distribution analytics: h, the degree bound Δ, f_d, the typical
// normalized degrees beta_l(d), the critical sparsity d_*, and the
// order-statistics validator.
#pragma once
#include <cstdint>
#include <optional>
#include <vector>

namespace sparsespec {

// h(a) = (1+a) log(1+a) - a
double h_fn(double alpha);

// Δ(d, N, C): d + C sqrt(d log N) for d >= log(N)/2, else C log N / (log log N - log d).
double delta_degree_bound(std::int64_t n, double d, double c);

// f_d(a) = d (a log a - a + 1) + (1/2) log(2 pi a d)
double f_d_fn(double d, double alpha);

// Unique root of f_d(beta) = log(N/l) in [1, ∞). Errors outside the
// existence window 1 <= l <= N / (C sqrt(d)) (C = existence_window_c) or when
// log(N/l) < f_d(1).
double beta_l(std::int64_t n, std::int64_t l, double d, double existence_window_c = 3.0);

// Unique root of f_d(2) = log N over d.
double d_star(std::int64_t n);

inline constexpr double b_star = 2.5886994495620903;  // 1 / (log 4 - 1)

struct DegreeModel {
    std::int64_t n = 0;
    double d = 0.0;
    double d_star_value = 0.0;
    std::int64_t l0 = 0;     // max{l : beta_l(d) >= 2}, 0 if none
    std::int64_t cal_l = 0;  // max{l : beta_l(d) >= 2 + (log d)^-kappa}

    static DegreeModel build(std::int64_t n, double d, double kappa);
    std::optional<double> beta(std::int64_t l) const;  // nullopt outside window
};

struct Figure1Row {
    std::int64_t l;
    double b;
    double value;  // Lambda(beta_l(b log n)); rows with beta < 2 are absent
};

std::vector<Figure1Row> figure1_curves(std::int64_t n, std::int64_t l_max,
                                       const std::vector<double>& b_grid);

struct PropD1Report {
    std::int64_t trials = 0;
    std::int64_t pairs_checked = 0;   // (trial, l) pairs in the subcritical branch
    std::int64_t pairs_passed = 0;
    double pass_rate = 1.0;
    bool supercritical = false;       // d > d_*: checked alpha_1 <= 2 + xi/d instead
};

// Monte Carlo check of the degree order-statistics predictions; xi is the
// slack sequence value (default choice elsewhere: log log N).
PropD1Report validate_prop_d1(std::int64_t n, double d, std::int64_t trials, double xi,
                              std::uint64_t seed);

} // namespace sparsespec
