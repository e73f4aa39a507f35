#pragma once

#include <map>
#include <span>
#include <vector>

#include "qwalk/fusion.hpp"

namespace qwalk {

/// A central element sum_s x(s) I_s, represented by its values on twice-spins
/// 0..cutoff; values beyond the cutoff are unrepresented.
struct CentralElement {
    std::vector<double> values;  // index = twice_spin

    int cutoff() const noexcept { return static_cast<int>(values.size()) - 1; }
    double at(int twice_spin) const noexcept {
        return (twice_spin >= 0 && twice_spin <= cutoff()) ? values[twice_spin] : 0.0;
    }
    static CentralElement constant(double value, int cutoff_twice_spin);
};

/// Certified Green-function values g_phi(s, t) for one target t. Each row
/// carries the geometric truncation-tail bound it was computed under.
struct GreenTable {
    struct Row {
        IrrepLabel s;
        double value = 0.0;
        double tail_bound = 0.0;
    };
    IrrepLabel target;
    double decay = 0.0;     // the certified lambda < 1
    int terms = 0;          // partial sums go over n = 0..terms
    std::vector<Row> rows;  // ascending twice-spin, 0..s_max

    const Row& row(int twice_spin) const;
};

/// Renewal quantities of the induced walk on the integers: the tilt delta,
/// the (negative) drift, and the step distribution p(n) = phi(e_n).
struct RenewalData {
    double delta = 0.0;
    double drift = 0.0;  // lambda_phi < 0
    std::map<int, double> p;
};

/// One-step kernel p_phi(s,t) = sum_r lambda_r (d_t / d_r d_s) N^t_{r,s}.
double transition_kernel(const WeightFunctional& phi, IrrepLabel s, IrrepLabel t, double q);

/// [phi^0 = counit, phi, phi^2, ..., phi^{n_max}] by repeated fusion products.
std::vector<WeightFunctional> convolution_powers(const WeightFunctional& phi, int n_max, double q);

/// Probability of a cylinder: p(0,s1) p(s1,s2) ... along the trajectory.
double path_probability(const WeightFunctional& phi, std::span<const IrrepLabel> trajectory,
                        double q);

/// lambda = sum_r lambda_r dim(r)/d_r; < 1 certifies transience.
double decay_rate(const WeightFunctional& phi, double q);

/// Partial sums sum_{n<=N} p_{phi^n}(s, target) for all s <= s_max, with N
/// chosen so every row's geometric tail bound is at most params.tol_tail.
GreenTable green_central(const WeightFunctional& phi, IrrepLabel target, IrrepLabel s_max,
                         const DeformationParams& params);

/// Step distribution p(n) = sum_{2s >= |n|, 2s = n mod 2} lambda_s q^n / d_s.
std::map<int, double> renewal_sequence(const WeightFunctional& phi, double q);

/// Solves sum_n q^{n delta} p(n) = 1 for the unique delta >= 0 (zero exactly
/// for states) and evaluates the tilted drift.
RenewalData solve_delta(const WeightFunctional& phi, double q);

struct AsymptoticRow {
    IrrepLabel s;
    double ratio = 0.0;           // g(s+1/2,0) / g(s,0)
    double ratio_bound = 0.0;     // propagated tail uncertainty
    double constant = 0.0;        // g(s,0) d_s q^{-2s(1+delta)}
    double constant_bound = 0.0;
};

/// Green-ratio and normalized-constant table used to observe the renewal
/// asymptotics; bounds are inherited from the green table rows.
std::vector<AsymptoticRow> asymptotic_report(const WeightFunctional& phi, IrrepLabel s_max,
                                             const DeformationParams& params);

struct MartinCentralRow {
    IrrepLabel s;
    double value = 0.0;  // g(s,t)/g(s,0)
    double bound = 0.0;
};

/// Central Martin kernel K(I_t)(s); rows are certified interval midpoints and
/// fail with numerical_error when a denominator is not certified positive.
std::vector<MartinCentralRow> martin_central(const WeightFunctional& phi, IrrepLabel target,
                                             IrrepLabel s_max, const DeformationParams& params);

/// One application of the central Markov operator to a cutoff element, values
/// beyond the cutoff treated as zero (the result is exact on entries whose
/// fusion range stays inside the cutoff).
CentralElement central_markov_apply(const WeightFunctional& phi, const CentralElement& x, double q);

struct BalayageResult {
    CentralElement reduced;
    double drop_bound = 0.0;  // total iterate mass dropped past the cutoff
    int iterations = 0;
};

/// Reduced element sum_n [(1-F_Y) P]^n F_Y x for a finite window Y: the
/// smallest superharmonic element agreeing with x on Y. Input must be
/// entrywise nonnegative and superharmonic on the checkable range.
BalayageResult balayage(const WeightFunctional& phi, const std::vector<IrrepLabel>& window,
                        const CentralElement& x, const DeformationParams& params);

/// sup_{s <= s_max} sum_t |p_{phi^{n+k}}(s,t) - p_{phi^n}(s,t)| -- a lower
/// bound for the 0-2-law norm, the sup being truncated at s_max.
double zero_two_estimate(const WeightFunctional& phi, int n, int k, IrrepLabel s_max, double q);

/// Batch variant: estimates for n = 1..n_max sharing one power table.
std::vector<double> zero_two_profile(const WeightFunctional& phi, int n_max, int k,
                                     IrrepLabel s_max, double q);

}  // namespace qwalk
