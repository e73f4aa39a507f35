#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qwalk/block_algebra.hpp"
#include "qwalk/central_walk.hpp"

namespace qwalk {

/// One application of the Markov operator P_phi to a block element: block t
/// receives sum_r lambda_r (phi_r (x) id)(V x_w V^T) over source blocks w
/// fusing with r into t, where phi_r acts as the d_r^{-1} q^{-2i}-weighted
/// partial trace on the first tensor factor.
BlockElement markov_step(const WeightFunctional& phi, const BlockElement& x, CGCache& cg);

/// A certified truncation of the potential sum_n P_phi^n(x).
struct BlockGreen {
    BlockElement value;          // blocks with twice-spin <= r_max
    std::map<int, double> tail;  // per-block operator-norm bound on the error
    int terms = 0;
    int working_cutoff = 0;      // twice-spin cutoff used during iteration
};

/// sum_{n<=N} P_phi^n(x) restricted to blocks <= r_max. N is chosen from the
/// geometric domination of positive elements (per source block, symmetric
/// inputs split spectrally into positive parts); mass dropped above the
/// working cutoff is certified against exact central kernels and folded into
/// the per-block tail bounds.
BlockGreen green_block(const WeightFunctional& phi, const BlockElement& x, IrrepLabel r_max,
                       const DeformationParams& params, CGCache& cg);

/// Martin kernel K(x): green_block(x) with block t divided by the certified
/// central Green value g(t,0). Fails with numerical_error when a denominator
/// is not certified positive (tail at least as large as the value).
BlockGreen martin_apply(const WeightFunctional& phi, const BlockElement& x, IrrepLabel r_max,
                        const DeformationParams& params, CGCache& cg);

/// Fourier image of the n-th power of the generator alpha*: the single-entry
/// block element (q^{-n}/d_{n/2}) m^{n/2}_{-n/2,-n/2} at twice-spin n.
BlockElement fourier_alpha_power(int n, double q);

/// Boundary polynomial with its construction route recorded.
struct PolynomialQ {
    enum class Provenance { recurrence, tilde };

    std::vector<double> coeffs;  // ascending degree
    Provenance provenance = Provenance::recurrence;

    int degree() const noexcept { return static_cast<int>(coeffs.size()) - 1; }
    double operator()(double x) const noexcept;  // Horner
};

/// p_n from the recurrence p_{n+1}(x) = c p_n(x) x - c^{-1} p_n(q^{-2}x)(x-1),
/// p_0 = 1, with 0 < c < 1.
PolynomialQ boundary_polynomial(int n, double c, double q);

/// Pointwise p_n(x) through the recurrence itself (a grid over x q^{-2k}).
/// The coefficients alternate with magnitude ~ q^{-n(n-1)}, so Horner
/// evaluation on [0,1] cancels catastrophically for n beyond ~5; this route
/// stays stable and is exact at x = 1 where the recurrence collapses.
double boundary_polynomial_value(int n, double c, double q, double x);

/// The same polynomials from the explicit q-binomial sum
/// p~_n(x) = sum_k q^{2n-4k} [n over k]_{q^2} q^{-2k(n-k)} x^{n-k} (x; q^{-2})_k.
PolynomialQ tilde_polynomial(int n, double q);

/// Blockwise deviation of the Martin image of F((alpha*)^n) from the boundary
/// polynomial evaluated on the diagonal q^{2r-2j}; deviations vanish at
/// infinity when the Martin boundary identification holds.
struct DeviationReport {
    int n = 0;
    struct Row {
        IrrepLabel r;
        double deviation = 0.0;  // operator norm
        double sup_entry = 0.0;  // diagnostic
        double tail = 0.0;       // propagated certified uncertainty
    };
    std::vector<Row> rows;
};

DeviationReport boundary_deviation(const WeightFunctional& phi, int n, IrrepLabel r_lo,
                                   IrrepLabel r_hi, const DeformationParams& params, CGCache& cg);

/// |(P_phi(x), y) - (x, P_phi(y))| in the Haar pairing (phi self-dual here).
double duality_residual(const WeightFunctional& phi, const BlockElement& x, const BlockElement& y,
                        CGCache& cg);

/// max over blocks <= r_max of ||P_phi(x) - x||; blocks of x missing inside
/// the needed fusion range are filled by the constant extension.
double harmonic_residual(const WeightFunctional& phi, const BlockElement& x, IrrepLabel r_max,
                         CGCache& cg, double constant_extension = 0.0);

}  // namespace qwalk
