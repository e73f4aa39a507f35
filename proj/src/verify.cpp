#include "qwalk/verify.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "qwalk/cli_support.hpp"
#include "qwalk/martin_kernel.hpp"

namespace qwalk {

namespace {

constexpr double kSweepQ[3] = {0.3, 0.5, 0.8};

struct SplitMix {
    std::uint64_t state;

    std::uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double symmetric() { return 2.0 * uniform() - 1.0; }
    int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

WeightFunctional random_weights(SplitMix& rng, int max_twice_spin, bool state) {
    const int count = 1 + rng.below(3);
    std::vector<std::pair<IrrepLabel, double>> entries;
    for (int i = 0; i < count; ++i)
        entries.push_back({IrrepLabel{rng.below(max_twice_spin + 1)}, 0.05 + rng.uniform()});
    double sum = 0.0;
    for (auto& [s, w] : entries) sum += w;
    const double target = state ? 1.0 : 0.3 + 0.6 * rng.uniform();
    for (auto& [s, w] : entries) w *= target / sum;
    return WeightFunctional(std::move(entries));
}

BlockElement random_block(SplitMix& rng, int max_twice_spin, bool symmetric) {
    BlockElement x;
    for (int s2 = 0; s2 <= max_twice_spin; ++s2) {
        Matrix m(s2 + 1, s2 + 1);
        for (int i = 0; i <= s2; ++i)
            for (int j = 0; j <= s2; ++j) m(i, j) = rng.symmetric();
        if (symmetric) m = 0.5 * (m + m.transpose()).eval();
        x.set(IrrepLabel{s2}, std::move(m));
    }
    return x;
}

class Runner {
public:
    Runner(std::vector<CheckResult>& out, std::string suite)
        : out_(out), suite_(std::move(suite)) {}

    void check(const std::string& name, const std::function<double()>& residual, double tol) {
        CheckResult r;
        r.suite = suite_;
        r.name = name;
        try {
            const double res = residual();
            r.pass = res <= tol;
            std::ostringstream os;
            os << "residual " << res << " vs tol " << tol;
            r.detail = os.str();
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        out_.push_back(std::move(r));
    }

private:
    std::vector<CheckResult>& out_;
    std::string suite_;
};

double rel_err(double got, double want) {
    const double scale = std::max({std::abs(got), std::abs(want), 1e-300});
    return std::abs(got - want) / scale;
}

// ---------------------------------------------------------------- fusion ---

void fusion_checks(std::vector<CheckResult>& out, double /*q*/, std::uint64_t seed) {
    Runner run(out, "fusion");

    run.check(
        "qdim-multiplicativity",
        [] {
            double worst = 0.0;
            for (double q : kSweepQ)
                for (int r2 = 0; r2 <= 20; ++r2)
                    for (int s2 = 0; s2 <= 20; ++s2) {
                        double sum = 0.0;
                        for (IrrepLabel t : fuse_labels({r2}, {s2})) sum += quantum_dim(t, q);
                        worst = std::max(
                            worst, rel_err(sum, quantum_dim({r2}, q) * quantum_dim({s2}, q)));
                    }
            return worst;
        },
        1e-10);

    run.check(
        "classical-dim-multiplicativity",
        [] {
            for (int r2 = 0; r2 <= 20; ++r2)
                for (int s2 = 0; s2 <= 20; ++s2) {
                    long long sum = 0;
                    for (IrrepLabel t : fuse_labels({r2}, {s2})) sum += t.dim();
                    if (sum != static_cast<long long>(r2 + 1) * (s2 + 1)) return 1.0;
                }
            return 0.0;
        },
        0.0);

    run.check(
        "product-associative-commutative",
        [seed] {
            SplitMix rng{seed};
            double worst = 0.0;
            for (double q : kSweepQ)
                for (int rep = 0; rep < 10; ++rep) {
                    const auto a = random_weights(rng, 6, false);
                    const auto b = random_weights(rng, 6, false);
                    const auto c = random_weights(rng, 6, false);
                    const auto ab_c = weight_product(weight_product(a, b, q), c, q);
                    const auto a_bc = weight_product(a, weight_product(b, c, q), q);
                    const auto ba = weight_product(b, a, q);
                    const auto ab = weight_product(a, b, q);
                    for (int s2 = 0; s2 <= ab_c.max_twice_spin(); ++s2) {
                        worst = std::max(worst, std::abs(ab_c.weight({s2}) - a_bc.weight({s2})));
                        worst = std::max(worst, std::abs(ab.weight({s2}) - ba.weight({s2})));
                    }
                }
            return worst;
        },
        1e-12);

    run.check(
        "norm-multiplicativity",
        [seed] {
            SplitMix rng{seed + 1};
            double worst = 0.0;
            for (double q : kSweepQ)
                for (int rep = 0; rep < 10; ++rep) {
                    const auto a = random_weights(rng, 6, false);
                    const auto b = random_weights(rng, 6, false);
                    worst = std::max(worst, std::abs(weight_product(a, b, q).norm() -
                                                     a.norm() * b.norm()));
                }
            return worst;
        },
        1e-12);

    run.check(
        "qnumber-symmetry",
        [] {
            double worst = 0.0;
            for (double q : kSweepQ)
                for (int n = 0; n <= 30; ++n)
                    worst = std::max(worst, rel_err(q_number(n, q), q_number(n, 1.0 / q)));
            return worst;
        },
        1e-12);
}

// ---------------------------------------------------------------- central ---

void central_checks(std::vector<CheckResult>& out, double q, std::uint64_t seed) {
    Runner run(out, "central");
    const WeightFunctional half = WeightFunctional::point(1);
    const WeightFunctional mixed({{1, 0.5}, {2, 0.5}});

    run.check(
        "stochasticity",
        [&] {
            double worst = 0.0;
            for (const auto& phi : {half, mixed})
                for (int s2 = 0; s2 <= 20; ++s2) {
                    double sum = 0.0;
                    for (int t2 = 0; t2 <= s2 + phi.max_twice_spin(); ++t2)
                        sum += transition_kernel(phi, {s2}, {t2}, q);
                    worst = std::max(worst, std::abs(sum - 1.0));
                }
            return worst;
        },
        1e-12);

    run.check(
        "self-duality",
        [&] {
            double worst = 0.0;
            for (int s2 = 0; s2 <= 10; ++s2)
                for (int t2 = 0; t2 <= 10; ++t2) {
                    const double ds = quantum_dim({s2}, q), dt = quantum_dim({t2}, q);
                    const double lhs = transition_kernel(mixed, {s2}, {t2}, q);
                    const double rhs =
                        (dt / ds) * (dt / ds) * transition_kernel(mixed, {t2}, {s2}, q);
                    if (lhs != 0.0 || rhs != 0.0) worst = std::max(worst, rel_err(lhs, rhs));
                }
            return worst;
        },
        1e-12);

    run.check(
        "chapman-kolmogorov",
        [&] {
            const auto powers = convolution_powers(half, 5, q);
            double worst = 0.0;
            for (int s2 = 0; s2 <= 6; ++s2)
                for (int t2 = 0; t2 <= 6; ++t2) {
                    double conv = 0.0;
                    for (int r2 = 0; r2 <= s2 + 2; ++r2)
                        conv += transition_kernel(powers[2], {s2}, {r2}, q) *
                                transition_kernel(powers[3], {r2}, {t2}, q);
                    worst =
                        std::max(worst, std::abs(conv - transition_kernel(powers[5], {s2}, {t2}, q)));
                }
            return worst;
        },
        1e-12);

    run.check(
        "green-tail-doubling",
        [&] {
            const DeformationParams loose(q, 1e-6);
            const DeformationParams tight(q, 1e-14);
            const auto ga = green_central(half, {0}, {12}, loose);
            const auto gb = green_central(half, {0}, {12}, tight);
            double worst = 0.0;  // violation amount, 0 when every row is inside its bound
            for (int s2 = 0; s2 <= 12; ++s2) {
                const double diff = std::abs(ga.row(s2).value - gb.row(s2).value);
                worst = std::max(worst, diff - ga.row(s2).tail_bound);
            }
            return worst;
        },
        0.0);

    run.check(
        "renewal-inversion",
        [&] {
            double worst = 0.0;
            for (const auto& phi : {half, mixed}) {
                const auto p = renewal_sequence(phi, q);
                auto at = [&](int n) {
                    auto it = p.find(n);
                    return it == p.end() ? 0.0 : it->second;
                };
                for (int s2 = 0; s2 <= 10; ++s2) {
                    const double ds = quantum_dim({s2}, q);
                    const double lhs = transition_kernel(phi, {s2}, {0}, q);
                    const double term_a = std::pow(q, s2) * at(-s2) / ds;
                    const double term_b = std::pow(q, s2 + 2) * at(-s2 - 2) / ds;
                    const double scale = std::max(
                        {std::abs(lhs), std::abs(term_a) + std::abs(term_b), 1e-300});
                    worst = std::max(worst, std::abs(lhs - (term_a - term_b)) / scale);
                }
            }
            return worst;
        },
        1e-12);

    run.check(
        "martin-unit-row",
        [&] {
            const DeformationParams params(q, 1e-12);
            const auto rows = martin_central(half, {0}, {10}, params);
            double worst = 0.0;
            for (const auto& row : rows) worst = std::max(worst, std::abs(row.value - 1.0));
            return worst;
        },
        0.0);

    (void)seed;
}

// ------------------------------------------------------------------ block ---

void block_checks(std::vector<CheckResult>& out, double q, std::uint64_t seed) {
    Runner run(out, "block");

    run.check(
        "rep-relations",
        [] {
            double worst = 0.0;
            for (double q : kSweepQ)
                for (int s2 = 0; s2 <= 20; ++s2) {
                    const auto rep = rep_matrices({s2}, q);
                    const int n = s2 + 1;
                    auto rel = [&](const Matrix& lhs, const Matrix& rhs) {
                        return operator_norm(lhs - rhs) / std::max(1.0, operator_norm(rhs));
                    };
                    worst = std::max(worst, rel(rep.k * rep.k_inv, Matrix::Identity(n, n)));
                    worst = std::max(worst, rel(rep.k * rep.e, q * rep.e * rep.k));
                    worst = std::max(worst, rel(rep.k * rep.f, 1.0 / q * rep.f * rep.k));
                    const Matrix casimir = (rep.k * rep.k - rep.k_inv * rep.k_inv) / (q - 1.0 / q);
                    worst = std::max(worst, rel(rep.e * rep.f - rep.f * rep.e, casimir));
                }
            return worst;
        },
        1e-10);

    run.check(
        "cg-orthonormality-intertwining",
        [] {
            const double q = 0.5;
            const auto dE = [&](const RepMatrices& a, const RepMatrices& b) -> Matrix {
                return kron(a.e, b.k_inv) + kron(a.k, b.e);
            };
            const auto dF = [&](const RepMatrices& a, const RepMatrices& b) -> Matrix {
                return kron(a.f, b.k_inv) + kron(a.k, b.f);
            };
            double worst = 0.0;
            for (int r2 = 0; r2 <= 16; ++r2)
                for (int t2 = 0; t2 <= 16; ++t2) {
                    const auto rr = rep_matrices({r2}, q);
                    const auto rt = rep_matrices({t2}, q);
                    for (IrrepLabel w : fuse_labels({r2}, {t2})) {
                        const auto iso = cg_isometry({r2}, {t2}, w, q);
                        const auto rw = rep_matrices(w, q);
                        worst = std::max(worst,
                                         operator_norm(iso.v.transpose() * iso.v -
                                                       Matrix::Identity(w.dim(), w.dim())));
                        worst =
                            std::max(worst, operator_norm(dE(rr, rt) * iso.v - iso.v * rw.e));
                        worst =
                            std::max(worst, operator_norm(dF(rr, rt) * iso.v - iso.v * rw.f));
                        worst = std::max(worst, operator_norm(kron(rr.k, rt.k) * iso.v -
                                                              iso.v * rw.k));
                    }
                }
            return worst;
        },
        1e-9);

    run.check(
        "cg-completeness",
        [] {
            const double q = 0.5;
            double worst = 0.0;
            for (int r2 = 0; r2 <= 12; ++r2)
                for (int t2 = 0; t2 <= 12; ++t2) {
                    const int dim = (r2 + 1) * (t2 + 1);
                    Matrix sum = Matrix::Zero(dim, dim);
                    for (IrrepLabel w : fuse_labels({r2}, {t2})) {
                        const auto iso = cg_isometry({r2}, {t2}, w, q);
                        sum += iso.v * iso.v.transpose();
                    }
                    worst = std::max(worst, operator_norm(sum - Matrix::Identity(dim, dim)));
                }
            return worst;
        },
        1e-9);

    run.check(
        "podles-residuals",
        [] {
            double worst = 0.0;
            for (double q : kSweepQ)
                for (int s2 = 0; s2 <= 16; ++s2)
                    worst = std::max(worst, podles_residuals({s2}, q).max());
            return worst;
        },
        1e-9);

    run.check(
        "chi0-identity",
        [] {
            double worst = 0.0;
            for (double q : kSweepQ)
                for (int s2 = 0; s2 <= 16; ++s2)
                    worst = std::max(worst, chi0_identity_residual({s2}, q));
            return worst;
        },
        1e-10);

    run.check(
        "adjoint-spin1",
        [] {
            double worst = 0.0;
            for (double q : kSweepQ)
                for (int s2 = 0; s2 <= 16; ++s2)
                    worst = std::max(worst, adjoint_spin1_residual({s2}, q));
            return worst;
        },
        1e-10);

    run.check(
        "haar-positivity",
        [&, seed] {
            SplitMix rng{seed + 2};
            double worst_negative = 0.0;
            for (int rep = 0; rep < 20; ++rep) {
                const auto x = random_block(rng, 4, true);
                const double quad = haar_pairing(x, x, q);
                if (quad <= 1e-12) worst_negative = 1.0;
            }
            return worst_negative;
        },
        0.0);
}

// ----------------------------------------------------------------- martin ---

void martin_checks(std::vector<CheckResult>& out, double q, std::uint64_t seed) {
    Runner run(out, "martin");
    const WeightFunctional half = WeightFunctional::point(1);
    const WeightFunctional mixed({{1, 0.5}, {2, 0.5}});

    run.check(
        "unitality-positivity",
        [&, seed] {
            CGCache cg(q);
            double worst = 0.0;
            const int cutoff = 8;
            const auto one = BlockElement::identity(cutoff);
            for (const auto& phi : {half, mixed}) {
                const auto image = markov_step(phi, one, cg);
                const int reach = phi.max_twice_spin();
                for (int t2 = 0; t2 + reach <= cutoff; ++t2)
                    worst = std::max(
                        worst, operator_norm(*image.find(t2) - phi.norm() *
                                                                   Matrix::Identity(t2 + 1, t2 + 1)));
            }
            SplitMix rng{seed + 3};
            for (int rep = 0; rep < 5; ++rep) {
                auto x = random_block(rng, 4, true);
                BlockElement psd;
                for (const auto& [s2, m] : x.blocks())
                    psd.set({s2}, (m * m.transpose()).eval());
                const auto image = markov_step(half, psd, cg);
                for (const auto& [t2, m] : image.blocks())
                    worst = std::max(worst, std::max(0.0, -min_symmetric_eigenvalue(
                                                              0.5 * (m + m.transpose()))));
            }
            return worst;
        },
        1e-10);

    run.check(
        "central-consistency",
        [&] {
            CGCache cg(q);
            double worst = 0.0;
            for (const auto& phi : {half, mixed})
                for (int t2 = 0; t2 <= 5; ++t2) {
                    const auto image = markov_step(phi, BlockElement::unit_block({t2}), cg);
                    for (const auto& [s2, m] : image.blocks()) {
                        const double p = transition_kernel(phi, {s2}, {t2}, q);
                        worst = std::max(worst,
                                         operator_norm(m - p * Matrix::Identity(s2 + 1, s2 + 1)) /
                                             std::max(1.0, p));
                    }
                }
            const DeformationParams params(q, 1e-10);
            const auto bg = green_block(half, BlockElement::unit_block({0}), {8}, params, cg);
            const auto gc = green_central(half, {0}, {8}, params);
            for (int t2 = 0; t2 <= 8; ++t2) {
                const Matrix& m = *bg.value.find(t2);
                worst = std::max(worst, operator_norm(m - gc.row(t2).value *
                                                              Matrix::Identity(t2 + 1, t2 + 1)) /
                                            std::max(1e-30, gc.row(t2).value));
            }
            return worst;
        },
        1e-10);

    run.check(
        "adjoint-covariance",
        [&, seed] {
            CGCache cg(q);
            SplitMix rng{seed + 4};
            double worst = 0.0;
            for (const auto& phi : {half, mixed}) {
                const auto x = random_block(rng, 6, false);
                for (Generator g : {Generator::e, Generator::f, Generator::k}) {
                    auto lhs = markov_step(phi, adjoint_action(g, x, q), cg);
                    lhs -= adjoint_action(g, markov_step(phi, x, cg), q);
                    worst = std::max(worst, lhs.sup_norm());
                }
            }
            return worst;
        },
        1e-9);

    run.check(
        "duality",
        [&, seed] {
            SplitMix rng{seed + 5};
            double worst = 0.0;
            for (double qq : kSweepQ) {
                CGCache cg(qq);
                const WeightFunctional phi({{1, 0.6}, {4, 0.4}});
                for (int rep = 0; rep < 50; ++rep) {
                    auto x = random_block(rng, 6, false);
                    auto y = random_block(rng, 6, false);
                    x *= 0.5;
                    y *= 0.5;
                    worst = std::max(worst, duality_residual(phi, x, y, cg));
                }
            }
            return worst;
        },
        1e-10);

    run.check(
        "polynomial-identity",
        [] {
            double worst = 0.0;
            for (double q : kSweepQ)
                for (int n = 0; n <= 10; ++n) {
                    const auto a = boundary_polynomial(n, q * q, q);
                    const auto b = tilde_polynomial(n, q);
                    for (int m = 0; m <= n; ++m)
                        worst = std::max(worst, rel_err(b.coeffs[m], a.coeffs[m]));
                }
            return worst;
        },
        1e-8);

    run.check(
        "leading-coefficient",
        [] {
            double worst = 0.0;
            for (double q : kSweepQ)
                for (double c : {q * q, std::pow(q, 2.7)})
                    for (int n = 0; n <= 10; ++n) {
                        const auto p = boundary_polynomial(n, c, q);
                        const double want = ((n % 2 == 0) ? 1.0 : -1.0) *
                                            std::pow(q, -double(n) * (n - 1)) * std::pow(c, -n) *
                                            q_pochhammer(c * c, q * q, n);
                        worst = std::max(worst, rel_err(p.coeffs[n], want));
                    }
            return worst;
        },
        1e-8);

    run.check(
        "unit-evaluation",
        [] {
            double worst = 0.0;
            for (double q : kSweepQ)
                for (int n = 0; n <= 10; ++n)
                    worst = std::max(worst, rel_err(boundary_polynomial_value(n, q * q, q, 1.0),
                                                    std::pow(q * q, n)));
            return worst;
        },
        1e-10);

    run.check(
        "boundary-convergence",
        [] {
            const double q = 0.5;
            const WeightFunctional phi = WeightFunctional::point(1);
            const DeformationParams params(q, 1e-3 * std::pow(q, 2.0 * 16) / 17.0);
            CGCache cg(q);
            double violation = 0.0;
            for (int n : {1, 2}) {
                const auto report = boundary_deviation(phi, n, {8}, {16}, params, cg);
                // Same-parity comparisons: integer spin steps.
                for (std::size_t i = 2; i < report.rows.size(); ++i) {
                    const auto& prev = report.rows[i - 2];
                    const auto& cur = report.rows[i];
                    violation = std::max(
                        violation, cur.deviation - prev.deviation - prev.tail - cur.tail);
                }
            }
            return violation;
        },
        0.0);

    (void)seed;
}

// -------------------------------------------------------------------- cli ---

void cli_checks(std::vector<CheckResult>& out, double q, std::uint64_t seed) {
    Runner run(out, "cli");

    run.check(
        "phi-roundtrip",
        [] {
            const auto phi = parse_phi("1:0.25,3:0.5,1:0.125");
            double worst = std::abs(phi.weight({1}) - 0.375);
            worst = std::max(worst, std::abs(phi.weight({3}) - 0.5));
            return worst;
        },
        0.0);

    run.check(
        "json-bit-roundtrip",
        [&] {
            RunConfig config;
            config.command = "green";
            config.q = q;
            config.phi_spec = "1:1.0";
            config.s_max2 = 12;
            config.format = "json";
            const OutputTable table = compute_table(config);
            const std::string emitted = emit_json(table, config);
            if (emitted != emit_json(compute_table(config), config)) return 1.0;  // determinism
            const auto parsed = nlohmann::json::parse(emitted);
            for (std::size_t i = 0; i < table.rows.size(); ++i) {
                const auto& row = parsed.at("rows").at(i);
                if (row.at("value").get<double>() != table.rows[i].value) return 1.0;
                if (row.at("tail_bound").get<double>() != table.rows[i].tail) return 1.0;
            }
            const std::string csv = emit_csv(table, config);
            if (csv != emit_csv(compute_table(config), config)) return 1.0;
            return 0.0;
        },
        0.0);

    run.check(
        "format-shortest-roundtrip",
        [seed] {
            SplitMix rng{seed + 6};
            for (int i = 0; i < 1000; ++i) {
                const double v = std::ldexp(rng.symmetric(), rng.below(120) - 60);
                if (std::stod(format_double(v)) != v) return 1.0;
            }
            return 0.0;
        },
        0.0);
}

}  // namespace

std::vector<CheckResult> run_checks(const std::string& suite, double q, std::uint64_t seed) {
    std::vector<CheckResult> out;
    const bool all = suite == "all";
    if (all || suite == "fusion") fusion_checks(out, q, seed);
    if (all || suite == "central") central_checks(out, q, seed);
    if (all || suite == "block") block_checks(out, q, seed);
    if (all || suite == "martin") martin_checks(out, q, seed);
    if (all || suite == "cli") cli_checks(out, q, seed);
    if (out.empty()) throw input_error("unknown verify suite: " + suite);
    return out;
}

}  // namespace qwalk
