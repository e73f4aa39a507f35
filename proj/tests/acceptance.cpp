// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "qwalk/martin_kernel.hpp"

using namespace qwalk;

namespace {

int failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s %2d: %s  [%s]\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

class Timer {
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();

public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
};

struct SplitMix {
    std::uint64_t state;
    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double symmetric() {
        return 2.0 * (static_cast<double>(next() >> 11) * 0x1.0p-53) - 1.0;
    }
};

const WeightFunctional kHalf = WeightFunctional::point(1);
const std::vector<WeightFunctional> kStates = {
    WeightFunctional::point(1),
    WeightFunctional({{1, 0.5}, {2, 0.5}}),
    WeightFunctional({{1, 0.3}, {3, 0.3}, {6, 0.4}}),
};

double rel_err(double got, double want) {
    const double scale = std::max({std::abs(got), std::abs(want), 1e-300});
    return std::abs(got - want) / scale;
}

// Row tolerance that keeps certified tails small relative to the renewal
// value scale q^{2s(1+delta)}/d_s at the deepest reported row.
double central_tol(double q, int s2_max, double eps) {
    return std::min(1e-10, eps * std::pow(q, s2_max) / (s2_max + 1));
}

void criterion_1_and_2() {
    bool pass1 = true;
    std::ostringstream detail1;
    double constant_at_half = 0.0, drift_at_half = 0.0;
    for (double q : {0.3, 0.5, 0.8}) {
        Timer timer;
        const DeformationParams params(q, central_tol(q, 61, 1e-4));
        const GreenTable g = green_central(kHalf, {0}, {61}, params);
        const double ratio = g.row(61).value / g.row(60).value;
        const double err = std::abs(ratio - q * q);
        double max_tail = 0.0;
        for (const auto& row : g.rows) max_tail = std::max(max_tail, row.tail_bound);
        const double elapsed = timer.seconds();
        if (q == 0.5) {
            constant_at_half =
                g.row(60).value * quantum_dim({60}, q) * std::pow(q, -60.0);
            drift_at_half = solve_delta(kHalf, q).drift;
        }
        detail1 << "q=" << q << ": |ratio-q^2|=" << err << ", max tail=" << max_tail
                << ", " << elapsed << "s; ";
        if (!(err <= 5e-3) || !(max_tail < 1e-10) || !(elapsed <= 10.0)) pass1 = false;
    }
    report(1, "Green ratio converges to q^2 at s=30", pass1, detail1.str());

    std::ostringstream detail2;
    detail2 << "constant=" << constant_at_half << " vs 1.25, drift=" << drift_at_half;
    const bool pass2 = std::abs(constant_at_half / 1.25 - 1.0) <= 0.01 &&
                       std::abs(drift_at_half + 0.6) <= 1e-12;
    report(2, "normalized Green constant at s=30", pass2, detail2.str());
}

void criterion_3() {
    double worst = 0.0;
    for (double q : {0.3, 0.5, 0.8})
        for (const auto& phi : kStates) {
            const auto p = renewal_sequence(phi, q);
            auto at = [&](int n) {
                auto it = p.find(n);
                return it == p.end() ? 0.0 : it->second;
            };
            for (int s2 = 0; s2 <= 20; ++s2) {
                const double ds = quantum_dim({s2}, q);
                const double lhs = transition_kernel(phi, {s2}, {0}, q);
                const double term_a = std::pow(q, s2) * at(-s2) / ds;
                const double term_b = std::pow(q, s2 + 2) * at(-s2 - 2) / ds;
                // Relative to the scale of the inversion formula's terms.
                const double scale =
                    std::max({std::abs(lhs), std::abs(term_a) + std::abs(term_b), 1e-300});
                worst = std::max(worst, std::abs(lhs - (term_a - term_b)) / scale);
            }
        }
    std::ostringstream detail;
    detail << "worst relative error " << worst;
    report(3, "kernel/renewal-sequence inversion to s=10", worst <= 1e-12, detail.str());
}

void criterion_4() {
    long long violations = 0;
    double worst_excess = 0.0;
    for (double q : {0.3, 0.5, 0.8})
        for (const auto& phi : kStates) {
            const double lambda = decay_rate(phi, q);
            const auto powers = convolution_powers(phi, 60, q);
            for (int n = 0; n <= 60; ++n)
                for (int s2 = 0; s2 <= 30; ++s2)
                    for (int t2 = 0; t2 <= 30; ++t2) {
                        const double p = transition_kernel(powers[n], {s2}, {t2}, q);
                        const double bound = quantum_dim({t2}, q) * (s2 + 1) /
                                             (quantum_dim({s2}, q) * (t2 + 1)) *
                                             std::pow(lambda, n);
                        if (p > bound * (1.0 + 1e-12) + 1e-300) {
                            ++violations;
                            worst_excess = std::max(worst_excess, p - bound);
                        }
                    }
        }
    std::ostringstream detail;
    detail << violations << " violations";
    if (violations > 0) detail << ", worst excess " << worst_excess;
    report(4, "geometric kernel bound, n<=60, s,t<=15", violations == 0, detail.str());
}

void criterion_5() {
    Timer timer;
    double worst_podles = 0.0, worst_chi0 = 0.0, worst_spin1 = 0.0;
    for (double q : {0.3, 0.5, 0.8})
        for (int s2 = 0; s2 <= 16; ++s2) {
            worst_podles = std::max(worst_podles, podles_residuals({s2}, q).max());
            worst_chi0 = std::max(worst_chi0, chi0_identity_residual({s2}, q));
            worst_spin1 = std::max(worst_spin1, adjoint_spin1_residual({s2}, q));
        }
    const double elapsed = timer.seconds();
    std::ostringstream detail;
    detail << "sphere " << worst_podles << ", chi0 " << worst_chi0 << ", spin-1 " << worst_spin1
           << ", " << elapsed << "s";
    report(5, "sphere-relation suite to s=8",
           worst_podles <= 1e-9 && worst_chi0 <= 1e-10 && worst_spin1 <= 1e-10 &&
               elapsed <= 5.0,
           detail.str());
}

void criterion_6() {
    const double q = 0.5;
    double worst = 0.0;
    for (int r2 = 0; r2 <= 16; ++r2)
        for (int t2 = 0; t2 <= 16; ++t2) {
            const auto rr = rep_matrices({r2}, q);
            const auto rt = rep_matrices({t2}, q);
            const Matrix de = kron(rr.e, rt.k_inv) + kron(rr.k, rt.e);
            const Matrix df = kron(rr.f, rt.k_inv) + kron(rr.k, rt.f);
            const Matrix dk = kron(rr.k, rt.k);
            const int dim = (r2 + 1) * (t2 + 1);
            Matrix completeness = Matrix::Zero(dim, dim);
            for (IrrepLabel w : fuse_labels({r2}, {t2})) {
                const auto iso = cg_isometry({r2}, {t2}, w, q);
                const auto rw = rep_matrices(w, q);
                worst = std::max(worst, (iso.v.transpose() * iso.v -
                                         Matrix::Identity(w.dim(), w.dim()))
                                            .norm());
                worst = std::max(worst, (de * iso.v - iso.v * rw.e).norm());
                worst = std::max(worst, (df * iso.v - iso.v * rw.f).norm());
                worst = std::max(worst, (dk * iso.v - iso.v * rw.k).norm());
                completeness += iso.v * iso.v.transpose();
            }
            worst = std::max(worst, (completeness - Matrix::Identity(dim, dim)).norm());
        }

    // Negative control: a perturbed isometry must trip the same detector.
    auto iso = cg_isometry({8}, {8}, {6}, q);
    Eigen::Index bump_row = 0;
    iso.v.col(0).cwiseAbs().maxCoeff(&bump_row);
    iso.v(bump_row, 0) += 1e-6;
    const double tripped =
        (iso.v.transpose() * iso.v - Matrix::Identity(7, 7)).norm();

    std::ostringstream detail;
    detail << "worst residual " << worst << ", perturbed control " << tripped;
    report(6, "Clebsch-Gordan suite to r,t=8", worst <= 1e-9 && tripped > 1e-9, detail.str());
}

void criterion_7() {
    double worst = 0.0;
    SplitMix rng{42};
    for (double q : {0.3, 0.5, 0.8}) {
        CGCache cg(q);
        for (int rep = 0; rep < 50; ++rep) {
            BlockElement x, y;
            for (int s2 = 0; s2 <= 6; ++s2) {
                Matrix mx(s2 + 1, s2 + 1), my(s2 + 1, s2 + 1);
                for (int i = 0; i <= s2; ++i)
                    for (int j = 0; j <= s2; ++j) {
                        mx(i, j) = 0.5 * rng.symmetric();
                        my(i, j) = 0.5 * rng.symmetric();
                    }
                x.set({s2}, std::move(mx));
                y.set({s2}, std::move(my));
            }
            worst = std::max(worst, duality_residual(kHalf, x, y, cg));
        }
    }
    std::ostringstream detail;
    detail << "worst residual " << worst << " over 150 seeded pairs";
    report(7, "Haar-pairing duality of the Markov operator", worst <= 1e-10, detail.str());
}

void criterion_8() {
    double worst_coeff = 0.0, worst_unit = 0.0, worst_lead = 0.0;
    for (double q : {0.3, 0.5, 0.8}) {
        const double c = q * q;
        for (int n = 0; n <= 10; ++n) {
            const auto a = boundary_polynomial(n, c, q);
            const auto b = tilde_polynomial(n, q);
            for (int m = 0; m <= n; ++m)
                worst_coeff = std::max(worst_coeff, rel_err(b.coeffs[m], a.coeffs[m]));
            worst_unit = std::max(
                worst_unit, rel_err(boundary_polynomial_value(n, c, q, 1.0), std::pow(c, n)));
            const double lead = ((n % 2 == 0) ? 1.0 : -1.0) *
                                std::pow(q, -double(n) * (n - 1)) * std::pow(c, -n) *
                                q_pochhammer(c * c, q * q, n);
            worst_lead = std::max(worst_lead, rel_err(a.coeffs[n], lead));
        }
    }
    std::ostringstream detail;
    detail << "coeff " << worst_coeff << ", p_n(1) " << worst_unit << ", leading "
           << worst_lead;
    report(8, "boundary polynomial identity and leading law, n<=10",
           worst_coeff <= 1e-8 && worst_unit <= 1e-10 && worst_lead <= 1e-8, detail.str());
}

void criterion_9_and_10() {
    const double q = 0.5;
    Timer timer;
    const DeformationParams params(q, 1e-3 * std::pow(q, 24) / 25.0);
    CGCache cg(q);

    bool pass9 = true;
    std::ostringstream detail9;
    for (int n : {1, 2}) {
        const auto rep = boundary_deviation(kHalf, n, {8}, {24}, params, cg);
        auto row = [&](int r2) { return rep.rows[static_cast<std::size_t>(r2 - 8)]; };
        const double d4 = row(8).deviation, d12 = row(24).deviation;
        if (!(d12 < 0.1 * d4)) pass9 = false;
        for (int r2 = 8; r2 + 2 <= 24; r2 += 2) {
            const auto& a = row(r2);
            const auto& b = row(r2 + 2);
            if (b.deviation > a.deviation + a.tail + b.tail) pass9 = false;
        }
        detail9 << "n=" << n << ": D(4)=" << d4 << ", D(12)=" << d12 << "; ";
    }
    const double elapsed9 = timer.seconds();
    detail9 << elapsed9 << "s";
    if (elapsed9 > 120.0) pass9 = false;
    report(9, "boundary deviation decays over r=4..12", pass9, detail9.str());

    const WeightFunctional other({{1, 0.5}, {2, 0.5}});
    CGCache cg2(q);
    const BlockElement x = fourier_alpha_power(1, q);
    const auto ka = martin_apply(kHalf, x, {24}, params, cg);
    const auto kb = martin_apply(other, x, {24}, params, cg2);
    const double gap4 = operator_norm(*ka.value.find(8) - *kb.value.find(8));
    const double gap12 = operator_norm(*ka.value.find(24) - *kb.value.find(24));
    std::ostringstream detail10;
    detail10 << "gap(4)=" << gap4 << ", gap(12)=" << gap12;
    report(10, "Martin image is asymptotically state-independent", gap12 * 5.0 <= gap4,
           detail10.str());
}

void criterion_11() {
    const double q = 0.5;
    const DeformationParams params(q, 1e-10);
    const std::vector<IrrepLabel> window = {{0}, {1}};
    const int cutoff = 80;

    bool pass = true;
    std::ostringstream detail;
    std::vector<std::pair<std::string, CentralElement>> inputs;
    inputs.push_back({"one", CentralElement::constant(1.0, cutoff)});
    const GreenTable g = green_central(kHalf, {0}, {cutoff}, DeformationParams(q, 1e-12));
    CentralElement pot;
    for (const auto& row : g.rows) pot.values.push_back(row.value);
    inputs.push_back({"green", pot});

    for (const auto& [name, x] : inputs) {
        const auto result = balayage(kHalf, window, x, params);
        double domination = 0.0, window_gap = 0.0;
        for (int s2 = 0; s2 <= cutoff; ++s2)
            domination = std::max(domination, result.reduced.values[s2] - x.values[s2]);
        for (IrrepLabel y : window)
            window_gap = std::max(
                window_gap,
                std::abs(result.reduced.values[y.twice_spin] - x.values[y.twice_spin]));
        CentralElement iterate = result.reduced;
        for (int i = 0; i < 40; ++i) iterate = central_markov_apply(kHalf, iterate, q);
        double sup = 0.0;
        for (double v : iterate.values) sup = std::max(sup, std::abs(v));
        detail << name << ": slack " << domination << ", window gap " << window_gap
               << ", P^40 sup " << sup << "; ";
        if (!(domination <= 1e-9) || !(window_gap <= 1e-9) || !(sup <= 1e-3)) pass = false;
    }
    report(11, "balayage reduction over Y={0,1/2}", pass, detail.str());
}

void criterion_12() {
    const double q = 0.5;
    bool pass = true;
    std::ostringstream detail;

    double worst_k1 = 0.0;
    for (int n = 1; n <= 10; ++n)
        worst_k1 = std::max(worst_k1, std::abs(zero_two_estimate(kHalf, n, 1, {240}, q) - 2.0));
    detail << "k=1 gap " << worst_k1;
    if (!(worst_k1 <= 1e-12)) pass = false;

    const auto profile = zero_two_profile(kHalf, 200, 2, {240}, q);
    double worst_increase = 0.0;
    for (std::size_t i = 1; i < profile.size(); ++i)
        worst_increase = std::max(worst_increase, profile[i] - profile[i - 1]);
    detail << ", k=2 worst increase " << worst_increase << ", estimate(200) " << profile[199];
    if (!(worst_increase <= 1e-9) || !(profile[199] <= 1e-2)) pass = false;

    // The estimate follows the local-CLT law ~ 2|k drift|/(sigma(n) sqrt(2 pi));
    // demonstrate that the 1e-2 level is in fact reached at the n that law
    // predicts, even when the n = 200 check above fails. Deep powers need the
    // transition ratios in closed form (quantum dimensions overflow binary64
    // past twice-spin ~1020), and single rows iterate cheaply.
    if (profile[199] > 1e-2) {
        const double n_needed = 200.0 * std::pow(profile[199] / 1e-2, 2.0);
        const int n_demo = static_cast<int>(std::ceil(n_needed / 500.0) * 500.0);
        const double d1 = quantum_dim({1}, q);
        auto p_up = [&](int u2) {
            return (1.0 - std::pow(q, 2 * u2 + 4)) / ((1.0 - std::pow(q, 2 * u2 + 2)) * d1 * q);
        };
        auto p_down = [&](int u2) {
            return q * (1.0 - std::pow(q, 2 * u2)) / ((1.0 - std::pow(q, 2 * u2 + 2)) * d1);
        };
        auto row_after = [&](int s2, int steps) {
            std::vector<double> v(static_cast<std::size_t>(s2 + steps) + 3, 0.0);
            std::vector<double> next(v.size(), 0.0);
            v[s2] = 1.0;
            for (int m = 0; m < steps; ++m) {
                std::fill(next.begin(), next.end(), 0.0);
                for (int u2 = 0; u2 <= s2 + m; ++u2) {
                    if (v[u2] == 0.0) continue;
                    next[u2 + 1] += v[u2] * p_up(u2);
                    if (u2 >= 1) next[u2 - 1] += v[u2] * p_down(u2);
                }
                v.swap(next);
            }
            return v;
        };
        double late = 0.0;
        for (int s2 : {0, 240}) {
            const auto a = row_after(s2, n_demo);
            const auto b = row_after(s2, n_demo + 2);
            double l1 = 0.0;
            for (std::size_t t = 0; t < a.size(); ++t) l1 += std::abs(b[t] - a[t]);
            late = std::max(late, l1);
        }
        detail << "; law-predicted crossing n=" << n_demo << ", sampled-row estimate there "
               << late;
    }

    report(12, "0-2 law estimates", pass, detail.str());
}

void criterion_13() {
    const double q = 0.5;
    const DeformationParams params(q, central_tol(q, 60, 1e-4));
    const auto rows = martin_central(kHalf, {1}, {60}, params);
    const double stability = std::abs(rows[60].value - rows[59].value);
    const double limit_err = std::abs(rows[60].value / 6.25 - 1.0);
    std::ostringstream detail;
    detail << "value(30)=" << rows[60].value << ", |v(30)-v(29.5)|=" << stability;
    report(13, "central Martin kernel stabilizes at d_{1/2}^2", stability <= 1e-3 && limit_err <= 0.01,
           detail.str());
}

}  // namespace

int main() {
    criterion_1_and_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9_and_10();
    criterion_11();
    criterion_12();
    criterion_13();
    std::printf("%s: %d criterion(s) failed\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                failures);
    return failures == 0 ? 0 : 1;
}
