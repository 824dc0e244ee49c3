// Implicit symmetric operators: centered adjacency A - EA, the pruned and
// restricted variant, and sparse Wigner matrices, all as fast matvecs.
#pragma once
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparsespec/graph.hpp"

namespace sparsespec {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct LinearOperator {
    virtual ~LinearOperator() = default;
    virtual std::int64_t size() const = 0;
    virtual void apply(const Vec& in, Vec& out) const = 0;
    Vec apply(const Vec& in) const {
        Vec out(size());
        apply(in, out);
        return out;
    }
};

enum class OperatorKind { plain, centered, pruned_restricted, wigner };

// Symmetric edge weights W_xy stored once per edge of the carrier graph,
// addressed in the order of the adjacency lists.
struct SparseWigner;

// A - EA (or plain A, or the pruned/restricted variant) as a matvec.
// EA has zero diagonal: centered matvec is A v - (d/N)(sum v) 1 + (d/N) v.
class CenteredOperator : public LinearOperator {
public:
    static CenteredOperator plain(const SparseGraph& g);
    static CenteredOperator centered(const SparseGraph& g);

    using LinearOperator::apply;
    std::int64_t size() const override { return g_->n; }
    void apply(const Vec& in, Vec& out) const override;

    OperatorKind kind() const { return kind_; }
    const SparseGraph& graph() const { return *g_; }
    double d_param() const { return d_override_ > 0.0 ? d_override_ : g_->d_param; }

    // Rows/columns outside V_l are zeroed; kept as a mask.
    const std::vector<char>& v_mask() const { return v_mask_; }
    // Coordinates inside Z_tau are excluded from the expectation shift.
    const std::vector<char>& z_mask() const { return z_mask_; }

    // Entry (x,y); O(log deg) lookup, used by dense materialization and oracles.
    double entry(std::int32_t x, std::int32_t y) const;

private:
    friend CenteredOperator make_pruned_restricted_operator(
        const SparseGraph& pruned_adjacency, double d_param,
        const std::vector<char>& z_mask, const std::vector<char>& v_mask);

    const SparseGraph* g_ = nullptr;  // not owned; caller keeps the graph alive
    OperatorKind kind_ = OperatorKind::plain;
    double d_override_ = -1.0;             // pruned kind: centering scale of the base graph
    std::vector<char> v_mask_;             // empty = no restriction
    std::vector<char> z_mask_;             // empty = no projection set
};

enum class WeightLaw { rademacher, uniform_scaled, custom_bounded };

struct SparseWigner : public LinearOperator {
    const SparseGraph* graph = nullptr;
    WeightLaw law = WeightLaw::rademacher;
    double bound_k = 1.0;
    std::uint64_t seed = 0;
    // weights[x][j] corresponds to graph->adjacency[x][j]; symmetric by construction.
    std::vector<std::vector<double>> weights;

    using LinearOperator::apply;
    std::int64_t size() const override { return graph->n; }
    void apply(const Vec& in, Vec& out) const override;
    double weight(std::int32_t x, std::int32_t y) const;
};

// exactly (A - EA) v; O(nnz + n).
Vec centered_matvec(const CenteredOperator& op, const Vec& v);

// X = A ∘ W with i.i.d. symmetric weights on the edges; deterministic given
// seed. rademacher: ±1. uniform_scaled: uniform on [-√3, √3] (unit variance).
// custom_bounded(K): ±K with probability 1/(2K²) each, 0 otherwise (K ≥ 1).
SparseWigner make_wigner(const SparseGraph& g, WeightLaw law, std::uint64_t seed,
                         double bound_k = 1.0);

// Generalized normalized degree alpha_x = (1/d) Σ_y |X_xy|².
Vec generalized_alpha(const SparseWigner& x_op, double d);

// Dense materialization for oracles; refuses above the cap.
Mat materialize_dense(const LinearOperator& op, std::int64_t cap = 2000);

struct PrunedGraph;  // pruning.hpp

// Matvec of A̅_{tau,l}: pruned adjacency, expectation shift outside Z_tau,
// rows/columns outside V_l zeroed. order gives V_l = [N] \ {sigma(1..l-1)}.
CenteredOperator pruned_restricted(const CenteredOperator& base, const PrunedGraph& pruned,
                                   std::int64_t l, const DegreeOrder& order);

// Internal assembly hook shared with pruning.hpp users.
CenteredOperator make_pruned_restricted_operator(const SparseGraph& pruned_adjacency,
                                                 double d_param,
                                                 const std::vector<char>& z_mask,
                                                 const std::vector<char>& v_mask);

// Weighted edge list: the graph header line followed by "u v w" triples.
void save_wigner(const SparseWigner& x, const std::string& path);
// Reads the triples back onto a carrier graph owned by the caller.
SparseWigner load_wigner(const SparseGraph& g, const std::string& path);

} // namespace sparsespec
