#pragma once

#include <compare>
#include <initializer_list>
#include <utility>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk {

/// An irreducible corepresentation class of SU_q(2), stored as twice the spin
/// so that all fusion combinatorics is exact integer arithmetic.
struct IrrepLabel {
    int twice_spin = 0;

    constexpr int dim() const noexcept { return twice_spin + 1; }
    friend constexpr auto operator<=>(const IrrepLabel&, const IrrepLabel&) = default;
};

/// Deformation parameter and the two tolerances threaded through certified
/// computations: tol_tail bounds truncation tails, tol_assert bounds identity
/// residuals.
struct DeformationParams {
    double q;
    double tol_tail = 1e-8;
    double tol_assert = 1e-9;

    explicit DeformationParams(double q_, double tail = 1e-8, double assert_ = 1e-9);
};

/// [n]_q = (q^n - q^{-n}) / (q - q^{-1}); [0]_q = 0, [-n]_q = -[n]_q.
double q_number(int n, double q);

/// (a; r)_n = prod_{i=0}^{n-1} (1 - a r^i), empty product for n = 0.
double q_pochhammer(double a, double r, int n);

/// Gaussian binomial [n over m]_r = (r;r)_n / ((r;r)_m (r;r)_{n-m}), 0 <= m <= n.
double q_binomial(int n, int m, double base);

/// Quantum dimension d_s = [2s+1]_q.
double quantum_dim(IrrepLabel s, double q);

/// Decomposition of U^r x U^s: labels t with |r-s| <= t <= r+s, integer steps.
/// SU_q(2) fusion is multiplicity-free, so membership is the fusion coefficient.
std::vector<IrrepLabel> fuse_labels(IrrepLabel r, IrrepLabel s);

/// N^t_{r,s} as a boolean (multiplicities are 0 or 1).
bool fusion_allowed(IrrepLabel r, IrrepLabel s, IrrepLabel t);

/// A q-tracial functional phi = sum_s lambda_s phi_s, held as a finitely
/// supported nonnegative weight map with norm at most one.
class WeightFunctional {
public:
    using Entry = std::pair<IrrepLabel, double>;

    WeightFunctional() = default;
    WeightFunctional(std::initializer_list<std::pair<int, double>> entries);
    explicit WeightFunctional(std::vector<Entry> entries);

    /// The functional lambda * phi_{s}, label given as twice-spin.
    static WeightFunctional point(int twice_spin, double weight = 1.0);
    /// The counit: weight one at the trivial label.
    static WeightFunctional counit() { return point(0, 1.0); }

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    double weight(IrrepLabel s) const noexcept;
    double norm() const noexcept;
    bool is_state(double tol = 1e-12) const noexcept;
    bool empty() const noexcept { return entries_.empty(); }
    int max_twice_spin() const noexcept;

private:
    std::vector<Entry> entries_;  // sorted by label, weights > 0
    void normalize_rep();
};

/// Fusion-ring product: phi_s phi_t = sum_w (d_w / d_s d_t) N^w_{s,t} phi_w,
/// extended bilinearly. Norms multiply.
WeightFunctional weight_product(const WeightFunctional& a, const WeightFunctional& b, double q);

/// phi -> phi-check. Every SU_q(2) label is self-conjugate, so this is the
/// identity on weights; kept as an interface point for general fusion rings.
WeightFunctional check_dual(const WeightFunctional& phi);

/// True iff some label with odd twice-spin carries positive weight; exactly
/// the generating condition for the walk on the label set.
bool is_generating(const WeightFunctional& phi);

}  // namespace qwalk
