#include "qwalk/central_walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qwalk {

namespace {

std::vector<double> qdim_table(int max_twice_spin, double q) {
    std::vector<double> d(static_cast<std::size_t>(max_twice_spin) + 1);
    for (int s2 = 0; s2 <= max_twice_spin; ++s2) d[s2] = q_number(s2 + 1, q);
    return d;
}

// Smallest N with pref * lambda^{N+1} / (1-lambda) <= tol.
int tail_terms(double pref, double lambda, double tol) {
    const double rhs = tol * (1.0 - lambda) / pref;
    int n = 0;
    if (rhs < lambda) {
        n = static_cast<int>(std::ceil(std::log(rhs) / std::log(lambda))) - 1;
        n = std::max(n, 0);
    }
    while (pref * std::pow(lambda, n + 1) / (1.0 - lambda) > tol) {
        ++n;
        if (n > 20'000'000) throw numerical_error("truncation term count exceeds budget");
    }
    return n;
}

}  // namespace

CentralElement CentralElement::constant(double value, int cutoff_twice_spin) {
    CentralElement x;
    x.values.assign(static_cast<std::size_t>(cutoff_twice_spin) + 1, value);
    return x;
}

const GreenTable::Row& GreenTable::row(int twice_spin) const {
    if (twice_spin < 0 || twice_spin >= static_cast<int>(rows.size()))
        throw input_error("green table row out of range");
    return rows[static_cast<std::size_t>(twice_spin)];
}

double transition_kernel(const WeightFunctional& phi, IrrepLabel s, IrrepLabel t, double q) {
    const double ds = quantum_dim(s, q);
    const double dt = quantum_dim(t, q);
    double p = 0.0;
    for (const auto& [r, lr] : phi.entries())
        if (fusion_allowed(r, s, t)) p += lr * dt / (quantum_dim(r, q) * ds);
    return p;
}

std::vector<WeightFunctional> convolution_powers(const WeightFunctional& phi, int n_max, double q) {
    if (n_max < 0) throw input_error("convolution_powers requires n_max >= 0");
    std::vector<WeightFunctional> powers;
    powers.reserve(static_cast<std::size_t>(n_max) + 1);
    powers.push_back(WeightFunctional::counit());
    for (int n = 1; n <= n_max; ++n) powers.push_back(weight_product(powers.back(), phi, q));
    return powers;
}

double path_probability(const WeightFunctional& phi, std::span<const IrrepLabel> trajectory,
                        double q) {
    if (trajectory.empty()) throw input_error("path_probability requires a nonempty trajectory");
    IrrepLabel prev{0};
    double p = 1.0;
    for (IrrepLabel next : trajectory) {
        p *= transition_kernel(phi, prev, next, q);
        prev = next;
    }
    return p;
}

double decay_rate(const WeightFunctional& phi, double q) {
    double lambda = 0.0;
    for (const auto& [r, lr] : phi.entries()) lambda += lr * r.dim() / quantum_dim(r, q);
    return lambda;
}

GreenTable green_central(const WeightFunctional& phi, IrrepLabel target, IrrepLabel s_max,
                         const DeformationParams& params) {
    const double q = params.q;
    const int t2 = target.twice_spin;
    const int smax2 = s_max.twice_spin;
    if (smax2 < 0) throw input_error("green_central requires s_max >= 0");
    if (smax2 > 100'000) throw numerical_error("green_central row range exceeds budget");

    const double lambda = decay_rate(phi, q);
    if (lambda >= 1.0 - 1e-14)
        throw input_error(
            "transience not certified: mean classical/quantum dimension ratio is not below one");

    const auto d = qdim_table(std::max(smax2, t2) + 1, q);
    const double dt = d[static_cast<std::size_t>(t2)];

    double maxpref = 0.0;
    for (int s2 = 0; s2 <= smax2; ++s2)
        maxpref = std::max(maxpref, dt * (s2 + 1) / (d[static_cast<std::size_t>(s2)] * (t2 + 1)));
    const int terms = tail_terms(maxpref, lambda, params.tol_tail);

    GreenTable table;
    table.target = target;
    table.decay = lambda;
    table.terms = terms;
    table.rows.resize(static_cast<std::size_t>(smax2) + 1);
    for (int s2 = 0; s2 <= smax2; ++s2) table.rows[s2].s = IrrepLabel{s2};

    WeightFunctional cur = WeightFunctional::counit();
    for (int n = 0;; ++n) {
        for (const auto& [r, lr] : cur.entries()) {
            const double dr = quantum_dim(r, q);
            for (IrrepLabel s : fuse_labels(r, target)) {
                if (s.twice_spin > smax2) break;
                table.rows[s.twice_spin].value += lr * dt / (dr * d[s.twice_spin]);
            }
        }
        if (n == terms) break;
        cur = weight_product(cur, phi, q);
    }

    const double geom = std::pow(lambda, terms + 1) / (1.0 - lambda);
    for (int s2 = 0; s2 <= smax2; ++s2)
        table.rows[s2].tail_bound = dt * (s2 + 1) / (d[s2] * (t2 + 1)) * geom;
    return table;
}

std::map<int, double> renewal_sequence(const WeightFunctional& phi, double q) {
    std::map<int, double> p;
    for (const auto& [s, ls] : phi.entries()) {
        const double ds = quantum_dim(s, q);
        for (int n = -s.twice_spin; n <= s.twice_spin; n += 2) p[n] += ls / ds * std::pow(q, n);
    }
    return p;
}

namespace {

// phi(rho^{-delta}) = sum_s (lambda_s/d_s) sum_j q^{2j(1+delta)}.
double tilt_mass(const WeightFunctional& phi, double q, double delta) {
    double f = 0.0;
    for (const auto& [s, ls] : phi.entries()) {
        double inner = 0.0;
        for (int j2 = -s.twice_spin; j2 <= s.twice_spin; j2 += 2)
            inner += std::pow(q, j2 * (1.0 + delta));
        f += ls / quantum_dim(s, q) * inner;
    }
    return f;
}

double tilt_drift(const WeightFunctional& phi, double q, double delta) {
    double drift = 0.0;
    for (const auto& [s, ls] : phi.entries()) {
        double inner = 0.0;
        for (int j2 = -s.twice_spin; j2 <= s.twice_spin; j2 += 2)
            inner += j2 * std::pow(q, j2 * (1.0 + delta));
        drift += ls / quantum_dim(s, q) * inner;
    }
    return drift;
}

}  // namespace

RenewalData solve_delta(const WeightFunctional& phi, double q) {
    if (!is_generating(phi))
        throw input_error("functional is not generating: no half-integer spin in its support");

    RenewalData out;
    out.p = renewal_sequence(phi, q);

    if (phi.is_state()) {
        out.delta = 0.0;  // phi(1) = 1 analytically; root-finding would wander
    } else {
        constexpr double delta_hi_budget = 64.0;
        double lo = 0.0, hi = 1.0;
        while (tilt_mass(phi, q, hi) < 1.0) {
            hi *= 2.0;
            if (hi > delta_hi_budget)
                throw numerical_error("tilt root not bracketed below delta = 64");
        }
        for (int it = 0; it < 300 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
            const double mid = 0.5 * (lo + hi);
            (tilt_mass(phi, q, mid) < 1.0 ? lo : hi) = mid;
        }
        out.delta = 0.5 * (lo + hi);
        if (std::abs(tilt_mass(phi, q, out.delta) - 1.0) > 1e-12)
            throw numerical_error("tilt equation not solved to tolerance");
    }

    out.drift = tilt_drift(phi, q, out.delta);
    if (!(out.drift < 0.0)) throw numerical_error("tilted drift is not negative");
    return out;
}

std::vector<AsymptoticRow> asymptotic_report(const WeightFunctional& phi, IrrepLabel s_max,
                                             const DeformationParams& params) {
    const double q = params.q;
    const RenewalData renewal = solve_delta(phi, q);
    const GreenTable g =
        green_central(phi, IrrepLabel{0}, IrrepLabel{s_max.twice_spin + 1}, params);

    std::vector<AsymptoticRow> rows;
    rows.reserve(static_cast<std::size_t>(s_max.twice_spin) + 1);
    for (int s2 = 0; s2 <= s_max.twice_spin; ++s2) {
        const auto& den = g.row(s2);
        const auto& num = g.row(s2 + 1);
        if (!(den.value > den.tail_bound))
            throw numerical_error("green value undercertified at twice-spin " +
                                  std::to_string(s2) + "; tighten tol_tail");
        AsymptoticRow row;
        row.s = IrrepLabel{s2};
        row.ratio = num.value / den.value;
        row.ratio_bound =
            (num.tail_bound + row.ratio * den.tail_bound) / (den.value - den.tail_bound);
        const double scale =
            quantum_dim(IrrepLabel{s2}, q) * std::pow(q, -s2 * (1.0 + renewal.delta));
        row.constant = den.value * scale;
        row.constant_bound = den.tail_bound * scale;
        rows.push_back(row);
    }
    return rows;
}

std::vector<MartinCentralRow> martin_central(const WeightFunctional& phi, IrrepLabel target,
                                             IrrepLabel s_max, const DeformationParams& params) {
    if (!is_generating(phi))
        throw input_error("functional is not generating: no half-integer spin in its support");
    const GreenTable gt = green_central(phi, target, s_max, params);
    const GreenTable g0 = green_central(phi, IrrepLabel{0}, s_max, params);

    std::vector<MartinCentralRow> rows;
    rows.reserve(gt.rows.size());
    for (int s2 = 0; s2 <= s_max.twice_spin; ++s2) {
        const auto& num = gt.row(s2);
        const auto& den = g0.row(s2);
        if (!(den.value > den.tail_bound))
            throw numerical_error("martin kernel undercertified at twice-spin " +
                                  std::to_string(s2) + "; tighten tol_tail");
        MartinCentralRow row;
        row.s = IrrepLabel{s2};
        row.value = num.value / den.value;
        row.bound =
            (num.tail_bound + row.value * den.tail_bound) / (den.value - den.tail_bound);
        rows.push_back(row);
    }
    return rows;
}

CentralElement central_markov_apply(const WeightFunctional& phi, const CentralElement& x,
                                    double q) {
    const int cutoff = x.cutoff();
    CentralElement y = CentralElement::constant(0.0, cutoff);
    for (int s2 = 0; s2 <= cutoff; ++s2) {
        const double ds = q_number(s2 + 1, q);
        double acc = 0.0;
        for (const auto& [r, lr] : phi.entries()) {
            const double dr = quantum_dim(r, q);
            for (IrrepLabel t : fuse_labels(IrrepLabel{s2}, r)) {
                if (t.twice_spin > cutoff) break;
                acc += lr * quantum_dim(t, q) / (dr * ds) * x.values[t.twice_spin];
            }
        }
        y.values[s2] = acc;
    }
    return y;
}

BalayageResult balayage(const WeightFunctional& phi, const std::vector<IrrepLabel>& window,
                        const CentralElement& x, const DeformationParams& params) {
    const double q = params.q;
    if (decay_rate(phi, q) >= 1.0 - 1e-14)
        throw input_error(
            "transience not certified: mean classical/quantum dimension ratio is not below one");
    const int cutoff = x.cutoff();
    if (cutoff < 0) throw input_error("balayage requires a nonempty central element");
    if (window.empty()) throw input_error("balayage requires a nonempty window");

    std::vector<char> in_window(static_cast<std::size_t>(cutoff) + 1, 0);
    for (IrrepLabel y : window) {
        if (y.twice_spin < 0 || y.twice_spin > cutoff)
            throw input_error("window label outside the element cutoff");
        in_window[y.twice_spin] = 1;
    }

    double scale = 1.0;
    for (double v : x.values) {
        if (v < -1e-12 * scale) throw input_error("balayage input must be entrywise nonnegative");
        scale = std::max(scale, std::abs(v));
    }

    // Superharmonicity where the fusion range stays inside the cutoff.
    const int reach = phi.max_twice_spin();
    const CentralElement px = central_markov_apply(phi, x, q);
    for (int s2 = 0; s2 + reach <= cutoff; ++s2)
        if (px.values[s2] > x.values[s2] + params.tol_assert * scale)
            throw input_error("input is not superharmonic on the certified cutoff");

    const auto d = qdim_table(cutoff + reach, q);

    std::vector<double> w(static_cast<std::size_t>(cutoff) + 1, 0.0);
    for (int s2 = 0; s2 <= cutoff; ++s2)
        if (in_window[s2]) w[s2] = x.values[s2];

    BalayageResult result;
    result.reduced = CentralElement{w};
    double dropped = 0.0;

    constexpr int max_iterations = 200'000;
    std::vector<double> pw(static_cast<std::size_t>(cutoff + reach) + 1);
    int iter = 1;
    for (; iter <= max_iterations; ++iter) {
        std::fill(pw.begin(), pw.end(), 0.0);
        // (P w)(s) = sum_t p(s,t) w(t); w vanishes beyond the cutoff, so rows
        // up to cutoff+reach are exact.
        for (int t2 = 0; t2 <= cutoff; ++t2) {
            if (w[t2] == 0.0) continue;
            for (const auto& [r, lr] : phi.entries()) {
                const double coeff = lr * d[t2] / quantum_dim(r, q) * w[t2];
                for (IrrepLabel s : fuse_labels(IrrepLabel{t2}, r))
                    pw[s.twice_spin] += coeff / d[s.twice_spin];
            }
        }
        for (int s2 = cutoff + 1; s2 <= cutoff + reach; ++s2) dropped += pw[s2];

        double increment = 0.0;
        for (int s2 = 0; s2 <= cutoff; ++s2) {
            w[s2] = in_window[s2] ? 0.0 : pw[s2];
            result.reduced.values[s2] += w[s2];
            increment = std::max(increment, std::abs(w[s2]));
        }
        if (increment <= params.tol_tail) break;
    }
    if (iter > max_iterations)
        throw numerical_error("balayage iteration did not converge within budget");
    if (dropped > params.tol_tail)
        throw input_error("balayage mass accounting failed: iterate mass escaped the cutoff");

    result.drop_bound = dropped;
    result.iterations = iter;
    return result;
}

namespace {

double zero_two_from_rows(const WeightFunctional& pa, const WeightFunctional& pb,
                          IrrepLabel s_max, double q) {
    const int smax2 = s_max.twice_spin;
    const int reach = std::max(pa.max_twice_spin(), pb.max_twice_spin());
    const auto d = qdim_table(smax2 + std::max(reach, 0), q);

    std::vector<double> row_a(d.size()), row_b(d.size());
    double best = 0.0;
    for (int s2 = 0; s2 <= smax2; ++s2) {
        std::fill(row_a.begin(), row_a.end(), 0.0);
        std::fill(row_b.begin(), row_b.end(), 0.0);
        const double ds = d[s2];
        for (const auto& [r, lr] : pa.entries()) {
            const double c = lr / (quantum_dim(r, q) * ds);
            for (IrrepLabel t : fuse_labels(IrrepLabel{s2}, r))
                row_a[t.twice_spin] += c * d[t.twice_spin];
        }
        for (const auto& [r, lr] : pb.entries()) {
            const double c = lr / (quantum_dim(r, q) * ds);
            for (IrrepLabel t : fuse_labels(IrrepLabel{s2}, r))
                row_b[t.twice_spin] += c * d[t.twice_spin];
        }
        double l1 = 0.0;
        for (std::size_t t = 0; t < row_a.size(); ++t) l1 += std::abs(row_a[t] - row_b[t]);
        best = std::max(best, l1);
    }
    return best;
}

}  // namespace

double zero_two_estimate(const WeightFunctional& phi, int n, int k, IrrepLabel s_max, double q) {
    if (n < 0 || k < 0) throw input_error("zero_two_estimate requires n, k >= 0");
    const auto powers = convolution_powers(phi, n + k, q);
    return zero_two_from_rows(powers[n], powers[n + k], s_max, q);
}

std::vector<double> zero_two_profile(const WeightFunctional& phi, int n_max, int k,
                                     IrrepLabel s_max, double q) {
    if (n_max < 1 || k < 0) throw input_error("zero_two_profile requires n_max >= 1, k >= 0");
    const auto powers = convolution_powers(phi, n_max + k, q);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_max));
    for (int n = 1; n <= n_max; ++n)
        out.push_back(zero_two_from_rows(powers[n], powers[n + k], s_max, q));
    return out;
}

}  // namespace qwalk
