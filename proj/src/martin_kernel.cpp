#include "qwalk/martin_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qwalk {

namespace {

BlockElement markov_step_truncated(const WeightFunctional& phi, const BlockElement& x,
                                   int cutoff_twice_spin, CGCache& cg) {
    const double q = cg.q();
    BlockElement out;
    for (const auto& [w2, xw] : x.blocks()) {
        const IrrepLabel w{w2};
        for (const auto& [r, lr] : phi.entries()) {
            const double dr = quantum_dim(r, q);
            for (IrrepLabel t : fuse_labels(r, w)) {
                if (t.twice_spin > cutoff_twice_spin) continue;
                const Matrix& v = cg.isometry(r, t, w);
                const int nt = t.dim();
                Matrix acc = Matrix::Zero(nt, nt);
                for (int a = 0; a <= r.twice_spin; ++a) {
                    // phi_r weights the first tensor slot by q^{-2i}, i = a - r.
                    const double weight = std::pow(q, r.twice_spin - 2 * a);
                    const auto va = v.middleRows(static_cast<Eigen::Index>(a) * nt, nt);
                    acc.noalias() += weight * (va * xw * va.transpose());
                }
                out.add(t, (lr / dr) * acc);
            }
        }
    }
    return out;
}

// One forward step of the central kernel c'(t) = sum_u p(t,u) c(u), optionally
// killing mass above a cutoff. Vectors are indexed by twice-spin.
void central_step(const WeightFunctional& phi, const std::vector<double>& c,
                  std::vector<double>& out, double q, int kill_above) {
    std::fill(out.begin(), out.end(), 0.0);
    const int n = static_cast<int>(c.size());
    for (int u2 = 0; u2 < n; ++u2) {
        if (c[u2] == 0.0) continue;
        const double du = q_number(u2 + 1, q);
        for (const auto& [r, lr] : phi.entries()) {
            const double base = lr * du / quantum_dim(r, q) * c[u2];
            for (IrrepLabel t : fuse_labels(IrrepLabel{u2}, r)) {
                if (t.twice_spin > kill_above) break;
                if (t.twice_spin < static_cast<int>(out.size()))
                    out[t.twice_spin] += base / q_number(t.twice_spin + 1, q);
            }
        }
    }
}

struct SourceScale {
    int w2;
    double scale;
};

std::vector<SourceScale> source_scales(const BlockElement& x) {
    std::vector<SourceScale> sources;
    for (const auto& [w2, m] : x.blocks()) {
        double scale;
        if (is_symmetric(m)) {
            auto [plus, minus] = split_positive_negative(m);
            scale = operator_norm(plus) + operator_norm(minus);
        } else {
            scale = operator_norm(m);
        }
        if (scale > 0.0) sources.push_back({w2, scale});
    }
    return sources;
}

}  // namespace

BlockElement markov_step(const WeightFunctional& phi, const BlockElement& x, CGCache& cg) {
    return markov_step_truncated(phi, x, std::numeric_limits<int>::max(), cg);
}

BlockGreen green_block(const WeightFunctional& phi, const BlockElement& x, IrrepLabel r_max,
                       const DeformationParams& params, CGCache& cg) {
    const double q = params.q;
    const int rmax2 = r_max.twice_spin;
    const double lambda = decay_rate(phi, q);
    if (lambda >= 1.0 - 1e-14)
        throw input_error(
            "transience not certified: mean classical/quantum dimension ratio is not below one");

    BlockGreen out;
    const auto sources = source_scales(x);
    if (sources.empty()) {
        for (int t2 = 0; t2 <= rmax2; ++t2) {
            out.value.set(IrrepLabel{t2}, Matrix::Zero(t2 + 1, t2 + 1));
            out.tail[t2] = 0.0;
        }
        return out;
    }

    // Geometric domination per (target, source): P^n(x)|_t is bounded in norm
    // by scale_w (d_w dim t / d_t dim w) lambda^n.
    auto prefactor_sum = [&](int t2) {
        double sum = 0.0;
        const double dt = q_number(t2 + 1, q);
        for (const auto& src : sources)
            sum += src.scale * q_number(src.w2 + 1, q) * (t2 + 1) / (dt * (src.w2 + 1));
        return sum;
    };
    double maxpref = 0.0;
    for (int t2 = 0; t2 <= rmax2; ++t2) maxpref = std::max(maxpref, prefactor_sum(t2));

    int terms = 0;
    {
        const double rhs = params.tol_tail * (1.0 - lambda) / maxpref;
        if (rhs < lambda) {
            terms = std::max(
                0, static_cast<int>(std::ceil(std::log(rhs) / std::log(lambda))) - 1);
        }
        while (maxpref * std::pow(lambda, terms + 1) / (1.0 - lambda) > params.tol_tail) {
            ++terms;
            if (terms > 1'000'000) throw numerical_error("green_block term count exceeds budget");
        }
    }

    const int reach = phi.max_twice_spin();

    // Pick a working cutoff whose dropped-excursion mass, measured by exact
    // central kernels with and without killing, stays well under tol_tail.
    int cutoff = 0;
    std::vector<double> penalty(static_cast<std::size_t>(rmax2) + 1, 0.0);
    bool certified = false;
    for (int margin = 16; margin <= 96 && !certified; margin *= 2) {
        cutoff = std::max(rmax2 + margin, x.max_twice_spin());
        std::fill(penalty.begin(), penalty.end(), 0.0);
        for (const auto& src : sources) {
            const int full_top = src.w2 + (terms + 1) * std::max(reach, 1);
            std::vector<double> full(static_cast<std::size_t>(full_top) + 1, 0.0);
            std::vector<double> kill(static_cast<std::size_t>(cutoff) + 1, 0.0);
            std::vector<double> full_next(full.size()), kill_next(kill.size());
            full[src.w2] = 1.0;
            kill[src.w2] = 1.0;
            for (int n = 1; n <= terms; ++n) {
                central_step(phi, full, full_next, q, std::numeric_limits<int>::max());
                central_step(phi, kill, kill_next, q, cutoff);
                full.swap(full_next);
                kill.swap(kill_next);
                for (int t2 = 0; t2 <= rmax2; ++t2)
                    penalty[t2] += src.scale * std::max(0.0, full[t2] - kill[t2]);
            }
        }
        certified = *std::max_element(penalty.begin(), penalty.end()) <= 0.01 * params.tol_tail;
    }
    if (!certified)
        throw numerical_error("working cutoff could not be certified against excursion mass");

    BlockElement iterate = x;
    iterate.truncate(cutoff);
    for (int t2 = 0; t2 <= rmax2; ++t2) out.value.set(IrrepLabel{t2}, Matrix::Zero(t2 + 1, t2 + 1));
    auto absorb = [&](const BlockElement& b) {
        for (const auto& [t2, m] : b.blocks())
            if (t2 <= rmax2) out.value.add(IrrepLabel{t2}, m);
    };
    absorb(iterate);
    for (int n = 1; n <= terms; ++n) {
        iterate = markov_step_truncated(phi, iterate, cutoff, cg);
        absorb(iterate);
    }

    const double geom = std::pow(lambda, terms + 1) / (1.0 - lambda);
    for (int t2 = 0; t2 <= rmax2; ++t2) out.tail[t2] = prefactor_sum(t2) * geom + penalty[t2];
    out.terms = terms;
    out.working_cutoff = cutoff;
    return out;
}

BlockGreen martin_apply(const WeightFunctional& phi, const BlockElement& x, IrrepLabel r_max,
                        const DeformationParams& params, CGCache& cg) {
    if (!is_generating(phi))
        throw input_error("functional is not generating: no half-integer spin in its support");
    BlockGreen green = green_block(phi, x, r_max, params, cg);
    const GreenTable g0 = green_central(phi, IrrepLabel{0}, r_max, params);

    BlockGreen out;
    out.terms = green.terms;
    out.working_cutoff = green.working_cutoff;
    for (int t2 = 0; t2 <= r_max.twice_spin; ++t2) {
        const auto& row = g0.row(t2);
        if (!(row.value > row.tail_bound))
            throw numerical_error("martin kernel undercertified at twice-spin " +
                                  std::to_string(t2) + "; tighten tol_tail");
        const Matrix scaled = *green.value.find(t2) / row.value;
        const double denom = row.value - row.tail_bound;
        out.tail[t2] =
            green.tail[t2] / denom + operator_norm(scaled) * row.tail_bound / denom;
        out.value.set(IrrepLabel{t2}, scaled);
    }
    return out;
}

BlockElement fourier_alpha_power(int n, double q) {
    if (n < 0) throw input_error("fourier_alpha_power requires n >= 0");
    const IrrepLabel w{n};
    return BlockElement::matrix_unit(w, 0, 0, std::pow(q, -n) / quantum_dim(w, q));
}

double PolynomialQ::operator()(double x) const noexcept {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

PolynomialQ boundary_polynomial(int n, double c, double q) {
    if (n < 0) throw input_error("boundary_polynomial requires n >= 0");
    if (!(c > 0.0) || !(c < 1.0)) throw input_error("boundary_polynomial requires 0 < c < 1");
    std::vector<double> coeffs{1.0};
    for (int deg = 0; deg < n; ++deg) {
        std::vector<double> next(coeffs.size() + 1, 0.0);
        // p_{k+1}(x) = c p_k(x) x - c^{-1} p_k(q^{-2}x)(x - 1) in coefficients:
        // a'_m = (c - c^{-1} q^{-2(m-1)}) a_{m-1} + c^{-1} q^{-2m} a_m.
        for (std::size_t m = 0; m < next.size(); ++m) {
            double v = 0.0;
            if (m >= 1)
                v += (c - std::pow(q, -2.0 * (static_cast<double>(m) - 1.0)) / c) * coeffs[m - 1];
            if (m < coeffs.size()) v += std::pow(q, -2.0 * static_cast<double>(m)) / c * coeffs[m];
            next[m] = v;
        }
        coeffs = std::move(next);
    }
    return PolynomialQ{std::move(coeffs), PolynomialQ::Provenance::recurrence};
}

double boundary_polynomial_value(int n, double c, double q, double x) {
    if (n < 0) throw input_error("boundary_polynomial_value requires n >= 0");
    if (!(c > 0.0) || !(c < 1.0)) throw input_error("boundary_polynomial_value requires 0 < c < 1");
    // level[k] = p_j(x q^{-2k}); one grid point retires per level.
    std::vector<double> level(static_cast<std::size_t>(n) + 1, 1.0);
    std::vector<double> grid(level.size());
    for (int k = 0; k <= n; ++k) grid[k] = x * std::pow(q, -2.0 * k);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k + j < n; ++k)
            level[k] = c * level[k] * grid[k] - (level[k + 1] / c) * (grid[k] - 1.0);
        level.resize(level.size() - 1);
    }
    return level[0];
}

PolynomialQ tilde_polynomial(int n, double q) {
    if (n < 0) throw input_error("tilde_polynomial requires n >= 0");
    std::vector<double> coeffs(static_cast<std::size_t>(n) + 1, 0.0);
    const double q2 = q * q;
    for (int k = 0; k <= n; ++k) {
        // q^{2n-4k} [n over k]_{q^2} f_{n-k,k}(x),
        // f_{n-k,k}(x) = q^{-2k(n-k)} x^{n-k} (x; q^{-2})_k.
        std::vector<double> term(static_cast<std::size_t>(n) + 1, 0.0);
        term[n - k] = std::pow(q, 2.0 * n - 4.0 * k) * q_binomial(n, k, q2) *
                      std::pow(q, -2.0 * k * (n - k));
        for (int i = 0; i < k; ++i) {
            const double beta = std::pow(q, -2.0 * i);
            for (int m = n; m >= 0; --m) {
                double v = term[m];
                if (m >= 1) v -= beta * term[m - 1];
                term[m] = v;
            }
        }
        for (int m = 0; m <= n; ++m) coeffs[m] += term[m];
    }
    return PolynomialQ{std::move(coeffs), PolynomialQ::Provenance::tilde};
}

DeviationReport boundary_deviation(const WeightFunctional& phi, int n, IrrepLabel r_lo,
                                   IrrepLabel r_hi, const DeformationParams& params, CGCache& cg) {
    if (n < 0) throw input_error("boundary_deviation requires n >= 0");
    if (!phi.is_state()) throw input_error("boundary_deviation requires a state");
    if (r_lo.twice_spin > r_hi.twice_spin) throw input_error("empty block range");

    const double q = params.q;
    const BlockElement x = fourier_alpha_power(n, q);
    const BlockGreen martin = martin_apply(phi, x, r_hi, params, cg);

    DeviationReport report;
    report.n = n;
    for (int r2 = r_lo.twice_spin; r2 <= r_hi.twice_spin; ++r2) {
        Matrix diff = *martin.value.find(r2);
        // lambda~^{-1} k^2 is diagonal with entries q^{2r-2j} = q^{2*r2-2a}.
        for (int a = 0; a <= r2; ++a)
            diff(a, a) -= boundary_polynomial_value(n, q * q, q,
                                                    std::pow(q, 2.0 * r2 - 2.0 * a));
        DeviationReport::Row row;
        row.r = IrrepLabel{r2};
        row.deviation = operator_norm(diff);
        row.sup_entry = sup_entry(diff);
        row.tail = martin.tail.at(r2);
        report.rows.push_back(row);
    }
    return report;
}

double duality_residual(const WeightFunctional& phi, const BlockElement& x, const BlockElement& y,
                        CGCache& cg) {
    const double q = cg.q();
    const double lhs = haar_pairing(markov_step(phi, x, cg), y, q);
    const double rhs = haar_pairing(x, markov_step(phi, y, cg), q);
    return std::abs(lhs - rhs);
}

double harmonic_residual(const WeightFunctional& phi, const BlockElement& x, IrrepLabel r_max,
                         CGCache& cg, double constant_extension) {
    const int reach = phi.max_twice_spin();
    BlockElement extended = x;
    for (int w2 = 0; w2 <= r_max.twice_spin + reach; ++w2)
        if (!extended.find(w2))
            extended.set(IrrepLabel{w2},
                         constant_extension * Matrix::Identity(w2 + 1, w2 + 1));

    const BlockElement px = markov_step(phi, extended, cg);
    double worst = 0.0;
    for (int t2 = 0; t2 <= r_max.twice_spin; ++t2) {
        const Matrix* before = extended.find(t2);
        const Matrix* after = px.find(t2);
        Matrix diff = after ? *after : Matrix::Zero(t2 + 1, t2 + 1);
        if (before) diff -= *before;
        worst = std::max(worst, operator_norm(diff));
    }
    return worst;
}

}  // namespace qwalk
