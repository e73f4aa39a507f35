#include "qwalk/block_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace qwalk {

RepMatrices rep_matrices(IrrepLabel s, double q) {
    const int n = s.dim();
    RepMatrices rep;
    rep.s = s;
    rep.e = Matrix::Zero(n, n);
    rep.k = Matrix::Zero(n, n);
    rep.k_inv = Matrix::Zero(n, n);
    // Position a holds basis index i = a - s, ascending; k xi_i = q^{-i} xi_i,
    // e xi_i = sqrt([s+i][s-i+1]) xi_{i-1}.
    for (int a = 0; a < n; ++a) {
        const double ki = std::pow(q, 0.5 * s.twice_spin - a);
        rep.k(a, a) = ki;
        rep.k_inv(a, a) = 1.0 / ki;
    }
    for (int a = 1; a < n; ++a)
        rep.e(a - 1, a) = std::sqrt(q_number(a, q) * q_number(s.twice_spin - a + 1, q));
    rep.f = rep.e.transpose();
    return rep;
}

Vector rho_diag(IrrepLabel s, double q, double power) {
    Vector d(s.dim());
    for (int a = 0; a < s.dim(); ++a) d(a) = std::pow(q, (2 * a - s.twice_spin) * power);
    return d;
}

const Matrix* BlockElement::find(int twice_spin) const noexcept {
    auto it = blocks_.find(twice_spin);
    return it == blocks_.end() ? nullptr : &it->second;
}

void BlockElement::set(IrrepLabel s, Matrix m) {
    if (m.rows() != s.dim() || m.cols() != s.dim())
        throw input_error("block shape mismatch: expected " + std::to_string(s.dim()) +
                          " for twice-spin " + std::to_string(s.twice_spin));
    blocks_[s.twice_spin] = std::move(m);
}

void BlockElement::add(IrrepLabel s, const Matrix& m) {
    if (m.rows() != s.dim() || m.cols() != s.dim()) throw input_error("block shape mismatch");
    auto it = blocks_.find(s.twice_spin);
    if (it == blocks_.end())
        blocks_[s.twice_spin] = m;
    else
        it->second += m;
}

int BlockElement::max_twice_spin() const noexcept {
    return blocks_.empty() ? -1 : blocks_.rbegin()->first;
}

double BlockElement::sup_norm() const {
    double best = 0.0;
    for (const auto& [s2, m] : blocks_) best = std::max(best, operator_norm(m));
    return best;
}

BlockElement& BlockElement::operator+=(const BlockElement& other) {
    for (const auto& [s2, m] : other.blocks_) add(IrrepLabel{s2}, m);
    return *this;
}

BlockElement& BlockElement::operator-=(const BlockElement& other) {
    for (const auto& [s2, m] : other.blocks_) add(IrrepLabel{s2}, -m);
    return *this;
}

BlockElement& BlockElement::operator*=(double scale) {
    for (auto& [s2, m] : blocks_) m *= scale;
    return *this;
}

BlockElement BlockElement::identity(int cutoff_twice_spin, double scale) {
    BlockElement x;
    for (int s2 = 0; s2 <= cutoff_twice_spin; ++s2)
        x.blocks_[s2] = scale * Matrix::Identity(s2 + 1, s2 + 1);
    return x;
}

BlockElement BlockElement::unit_block(IrrepLabel s) {
    BlockElement x;
    x.blocks_[s.twice_spin] = Matrix::Identity(s.dim(), s.dim());
    return x;
}

BlockElement BlockElement::matrix_unit(IrrepLabel s, int row, int col, double value) {
    if (row < 0 || col < 0 || row >= s.dim() || col >= s.dim())
        throw input_error("matrix unit index out of range");
    BlockElement x;
    Matrix m = Matrix::Zero(s.dim(), s.dim());
    m(row, col) = value;
    x.blocks_[s.twice_spin] = std::move(m);
    return x;
}

int BlockElement::truncate(int cutoff_twice_spin) {
    int removed = 0;
    for (auto it = blocks_.begin(); it != blocks_.end();) {
        if (it->first > cutoff_twice_spin) {
            it = blocks_.erase(it);
            ++removed;
        } else {
            ++it;
        }
    }
    return removed;
}

ChiElements chi_elements(IrrepLabel s, double q) {
    const RepMatrices rep = rep_matrices(s, q);
    const double root2q = std::sqrt(q_number(2, q));
    ChiElements chi;
    chi.s = s;
    chi.chi_minus = -q * rep.f * rep.k;
    chi.chi_plus = q * rep.e * rep.k;
    chi.chi_zero = (rep.e * rep.f - q * q * rep.f * rep.e) / root2q;
    chi.lambda = q * (std::pow(q, s.twice_spin + 1) + std::pow(q, -s.twice_spin - 1)) /
                 ((q - 1.0 / q) * root2q);
    return chi;
}

double podles_c(IrrepLabel s, double q) {
    const double u = std::pow(q, s.twice_spin + 1) + std::pow(q, -s.twice_spin - 1);
    return -1.0 / (u * u);
}

double PodlesResiduals::max() const noexcept {
    return std::max({mixed_commutation, reflection, radius});
}

PodlesResiduals podles_residuals(IrrepLabel s, double q) {
    const ChiElements chi = chi_elements(s, q);
    const Matrix x_m = chi.chi_minus / chi.lambda;
    const Matrix x_0 = chi.chi_zero / chi.lambda;
    const Matrix x_p = chi.chi_plus / chi.lambda;
    const double qi = 1.0 / q;
    const int n = s.dim();

    PodlesResiduals res;
    res.mixed_commutation = operator_norm(q * x_p * x_0 - qi * x_0 * x_p - (qi - q) * x_p);
    res.reflection =
        operator_norm((qi - q) * x_0 * x_0 + x_m * x_p - x_p * x_m + (qi - q) * x_0);
    const double radius_const = 1.0 + (q + qi) * (q + qi) * podles_c(s, q);
    res.radius = operator_norm(x_0 * x_0 + x_m.transpose() * x_m + x_p.transpose() * x_p -
                               radius_const * Matrix::Identity(n, n));
    return res;
}

BlockElement adjoint_action(Generator g, const BlockElement& x, double q) {
    BlockElement out;
    for (const auto& [s2, m] : x.blocks()) {
        const RepMatrices rep = rep_matrices(IrrepLabel{s2}, q);
        Matrix r;
        switch (g) {
            case Generator::k:
                r = rep.k_inv * m * rep.k;
                break;
            case Generator::e:
                r = -1.0 / q * rep.e * m * rep.k_inv + rep.k_inv * m * rep.e;
                break;
            case Generator::f:
                r = -q * rep.f * m * rep.k_inv + rep.k_inv * m * rep.f;
                break;
        }
        out.set(IrrepLabel{s2}, std::move(r));
    }
    return out;
}

double haar_pairing(const BlockElement& x, const BlockElement& y, double q) {
    double sum = 0.0;
    for (const auto& [s2, xs] : x.blocks()) {
        const Matrix* ys = y.find(s2);
        if (!ys) continue;
        const IrrepLabel s{s2};
        const Vector neg_half = rho_diag(s, q, -0.5);
        const Vector pos_half = rho_diag(s, q, 0.5);
        const Vector neg_one = rho_diag(s, q, -1.0);
        const Matrix m = xs * neg_half.asDiagonal() * ys->transpose() * pos_half.asDiagonal() *
                         neg_one.asDiagonal();
        sum += quantum_dim(s, q) * m.trace();
    }
    return sum;
}

namespace {

// All isometries for one product H_r (x) H_t, built from the largest label
// downward. Each lowered column is projected against the same-weight columns
// of the higher labels already built: in exact arithmetic the projection
// vanishes, numerically it strips the cross-irrep leakage that the lowering
// recursion would otherwise amplify.
std::map<int, Matrix> build_cg_family(IrrepLabel r, IrrepLabel t, double q) {
    const RepMatrices rr = rep_matrices(r, q);
    const RepMatrices rt = rep_matrices(t, q);
    const int nr = r.dim(), nt = t.dim();
    const Matrix raise = kron(rr.e, rt.k_inv) + kron(rr.k, rt.e);
    const Matrix lower = kron(rr.f, rt.k_inv) + kron(rr.k, rt.f);

    auto weight2 = [&](int a, int b) { return 2 * a - r.twice_spin + 2 * b - t.twice_spin; };

    std::map<int, Matrix> family;
    // Column of pi_w-index m (twice-index m2) sits at position (m2 + w2)/2 and
    // is supported on the composite weight-(-m2) subspace.
    auto project_out_higher = [&](Vector& vec, int w2, int m2) {
        for (const auto& [w2h, vh] : family) {
            if (w2h <= w2) continue;
            const auto col = vh.col((m2 + w2h) / 2);
            vec -= col.dot(vec) * col;
        }
    };

    auto fused = fuse_labels(r, t);
    for (auto it = fused.rbegin(); it != fused.rend(); ++it) {
        const IrrepLabel w = *it;
        const int w2 = w.twice_spin;
        const int nw = w.dim();

        std::vector<int> source;  // composite indices at weight -w2
        std::vector<int> image;   // composite indices at weight -w2 - 2
        for (int a = 0; a < nr; ++a)
            for (int b = 0; b < nt; ++b) {
                if (weight2(a, b) == -w2) source.push_back(a * nt + b);
                if (weight2(a, b) == -w2 - 2) image.push_back(a * nt + b);
            }

        Vector top_local = Vector::Zero(static_cast<Eigen::Index>(source.size()));
        if (source.size() == 1) {
            top_local(0) = 1.0;
        } else {
            Matrix a(static_cast<Eigen::Index>(image.size()),
                     static_cast<Eigen::Index>(source.size()));
            for (std::size_t i = 0; i < image.size(); ++i)
                for (std::size_t j = 0; j < source.size(); ++j)
                    a(i, j) = raise(image[i], source[j]);
            // The raising map drops the weight-space dimension by one, so the
            // kernel is one-dimensional exactly when a has full row rank.
            Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
            const Vector& sv = svd.singularValues();  // descending, size n-1
            const double rank_tol = 1e-8 * std::max(1.0, sv(0));
            if (a.rows() + 1 != a.cols() || sv(sv.size() - 1) <= rank_tol)
                throw numerical_error("highest-weight kernel is not one-dimensional");
            top_local = svd.matrixV().col(a.cols() - 1);
        }

        Vector top = Vector::Zero(nr * nt);
        for (std::size_t j = 0; j < source.size(); ++j) top(source[j]) = top_local(j);
        project_out_higher(top, w2, -w2);
        top /= top.norm();

        // Sign convention: positive coefficient on the smallest first-factor
        // index present in the top column.
        const double top_scale = top.cwiseAbs().maxCoeff();
        for (int p = 0; p < nr * nt; ++p) {
            if (std::abs(top(p)) > 1e-10 * top_scale) {
                if (top(p) < 0.0) top = -top;
                break;
            }
        }

        Matrix v = Matrix::Zero(nr * nt, nw);
        v.col(0) = top;
        for (int col = 0; col + 1 < nw; ++col) {
            // pi_w index m = col - w; next column is Delta(f) v / sqrt([w-m][w+m+1]).
            const int m2 = 2 * col - w2;
            const double norm2 =
                q_number((w2 - m2) / 2, q) * q_number((w2 + m2) / 2 + 1, q);
            Vector next = lower * v.col(col) / std::sqrt(norm2);
            project_out_higher(next, w2, m2 + 2);
            next /= next.norm();
            v.col(col + 1) = next;
        }
        family.emplace(w2, std::move(v));
    }
    return family;
}

}  // namespace

CGIsometry cg_isometry(IrrepLabel r, IrrepLabel t, IrrepLabel w, double q) {
    if (!fusion_allowed(r, t, w))
        throw input_error("label " + std::to_string(w.twice_spin) +
                          " does not occur in the fusion of " + std::to_string(r.twice_spin) +
                          " and " + std::to_string(t.twice_spin));
    auto family = build_cg_family(r, t, q);
    return CGIsometry{r, t, w, std::move(family.at(w.twice_spin))};
}

CGCache::CGCache(double q) : q_(q) {
    if (!(q > 0.0) || !(q < 1.0)) throw input_error("deformation parameter must lie in (0,1)");
}

const Matrix& CGCache::isometry(IrrepLabel r, IrrepLabel t, IrrepLabel w) {
    if (!fusion_allowed(r, t, w))
        throw input_error("label " + std::to_string(w.twice_spin) +
                          " does not occur in the fusion of " + std::to_string(r.twice_spin) +
                          " and " + std::to_string(t.twice_spin));
    const auto key = std::make_tuple(r.twice_spin, t.twice_spin, w.twice_spin);
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = memo_.find(key);
    if (it == memo_.end()) {
        for (auto& [w2, v] : build_cg_family(r, t, q_))
            memo_.emplace(std::make_tuple(r.twice_spin, t.twice_spin, w2), std::move(v));
        it = memo_.find(key);
    }
    return it->second;
}

Matrix coproduct_block(const Matrix& x_w, IrrepLabel w, IrrepLabel r, IrrepLabel t, CGCache& cg) {
    if (x_w.rows() != w.dim() || x_w.cols() != w.dim())
        throw input_error("coproduct_block shape mismatch");
    const int product_dim = r.dim() * t.dim();
    if (!fusion_allowed(r, t, w)) return Matrix::Zero(product_dim, product_dim);
    const Matrix& v = cg.isometry(r, t, w);
    return v * x_w * v.transpose();
}

double chi0_identity_residual(IrrepLabel s, double q) {
    const ChiElements chi = chi_elements(s, q);
    const RepMatrices rep = rep_matrices(s, q);
    const double c = q * std::sqrt(q_number(2, q)) / (q - 1.0 / q);
    const Matrix rhs = -chi.lambda * Matrix::Identity(s.dim(), s.dim()) + c * rep.k * rep.k;
    return operator_norm(chi.chi_zero - rhs) / std::max(1.0, operator_norm(rhs));
}

double adjoint_spin1_residual(IrrepLabel s, double q) {
    const ChiElements chi = chi_elements(s, q);
    const RepMatrices rep = rep_matrices(s, q);
    const RepMatrices pi1 = rep_matrices(IrrepLabel{2}, q);
    const std::array<Matrix, 3> gen = {chi.chi_minus / chi.lambda, chi.chi_zero / chi.lambda,
                                       chi.chi_plus / chi.lambda};

    double worst = 0.0;
    for (int j = 0; j < 3; ++j) {
        const Matrix& x = gen[j];
        const std::array<std::tuple<const Matrix*, Matrix, Matrix>, 3> actions = {
            std::tuple{&pi1.e, (-1.0 / q) * rep.e * x * rep.k_inv, rep.k_inv * x * rep.e},
            std::tuple{&pi1.f, -q * rep.f * x * rep.k_inv, rep.k_inv * x * rep.f},
            std::tuple{&pi1.k, rep.k_inv * x * rep.k, Matrix::Zero(s.dim(), s.dim())}};
        for (const auto& [coeffs, term_a, term_b] : actions) {
            Matrix expect = Matrix::Zero(s.dim(), s.dim());
            for (int k = 0; k < 3; ++k) expect += (*coeffs)(j, k) * gen[k];
            // Residual relative to the size of the summands actually formed:
            // their entries grow like q^{-2s} even though the result is O(1).
            const double scale =
                std::max({1.0, operator_norm(term_a), operator_norm(term_b)});
            worst = std::max(worst, operator_norm(term_a + term_b - expect) / scale);
        }
    }
    return worst;
}

}  // namespace qwalk
