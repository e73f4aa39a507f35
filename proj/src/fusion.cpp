#include "qwalk/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace qwalk {

DeformationParams::DeformationParams(double q_, double tail, double assert_)
    : q(q_), tol_tail(tail), tol_assert(assert_) {
    if (!(q > 0.0) || !(q < 1.0))
        throw input_error("deformation parameter must lie in (0,1), got q=" + std::to_string(q_));
    if (!(tol_tail > 0.0) || !(tol_assert > 0.0))
        throw input_error("tolerances must be strictly positive");
}

double q_number(int n, double q) {
    if (n == 0) return 0.0;
    return (std::pow(q, n) - std::pow(q, -n)) / (q - 1.0 / q);
}

double q_pochhammer(double a, double r, int n) {
    if (n < 0) throw input_error("q_pochhammer requires n >= 0");
    double prod = 1.0;
    double ark = a;
    for (int i = 0; i < n; ++i) {
        prod *= 1.0 - ark;
        ark *= r;
    }
    return prod;
}

double q_binomial(int n, int m, double base) {
    if (m < 0 || m > n) throw input_error("q_binomial requires 0 <= m <= n");
    return q_pochhammer(base, base, n) /
           (q_pochhammer(base, base, m) * q_pochhammer(base, base, n - m));
}

double quantum_dim(IrrepLabel s, double q) { return q_number(s.twice_spin + 1, q); }

std::vector<IrrepLabel> fuse_labels(IrrepLabel r, IrrepLabel s) {
    std::vector<IrrepLabel> out;
    const int lo = std::abs(r.twice_spin - s.twice_spin);
    const int hi = r.twice_spin + s.twice_spin;
    out.reserve((hi - lo) / 2 + 1);
    for (int t = lo; t <= hi; t += 2) out.push_back({t});
    return out;
}

bool fusion_allowed(IrrepLabel r, IrrepLabel s, IrrepLabel t) {
    const int lo = std::abs(r.twice_spin - s.twice_spin);
    const int hi = r.twice_spin + s.twice_spin;
    return t.twice_spin >= lo && t.twice_spin <= hi && (t.twice_spin - lo) % 2 == 0;
}

WeightFunctional::WeightFunctional(std::initializer_list<std::pair<int, double>> entries) {
    entries_.reserve(entries.size());
    for (const auto& [s2, w] : entries) entries_.push_back({IrrepLabel{s2}, w});
    normalize_rep();
}

WeightFunctional::WeightFunctional(std::vector<Entry> entries) : entries_(std::move(entries)) {
    normalize_rep();
}

void WeightFunctional::normalize_rep() {
    std::map<IrrepLabel, double> merged;
    for (const auto& [s, w] : entries_) {
        if (s.twice_spin < 0) throw input_error("weight map label must have twice_spin >= 0");
        if (w < 0.0) throw input_error("weight map entries must be nonnegative");
        if (!std::isfinite(w)) throw input_error("weight map entries must be finite");
        if (w > 0.0) merged[s] += w;
    }
    entries_.assign(merged.begin(), merged.end());
    if (norm() > 1.0 + 1e-12)
        throw input_error("weight map norm exceeds one: " + std::to_string(norm()));
}

WeightFunctional WeightFunctional::point(int twice_spin, double weight) {
    return WeightFunctional({{twice_spin, weight}});
}

double WeightFunctional::weight(IrrepLabel s) const noexcept {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), s,
                               [](const Entry& e, IrrepLabel lbl) { return e.first < lbl; });
    return (it != entries_.end() && it->first == s) ? it->second : 0.0;
}

double WeightFunctional::norm() const noexcept {
    double sum = 0.0;
    for (const auto& [s, w] : entries_) sum += w;
    return sum;
}

bool WeightFunctional::is_state(double tol) const noexcept { return std::abs(norm() - 1.0) <= tol; }

int WeightFunctional::max_twice_spin() const noexcept {
    return entries_.empty() ? -1 : entries_.back().first.twice_spin;
}

WeightFunctional weight_product(const WeightFunctional& a, const WeightFunctional& b, double q) {
    std::map<IrrepLabel, double> out;
    for (const auto& [r, lr] : a.entries()) {
        const double dr = quantum_dim(r, q);
        for (const auto& [s, ls] : b.entries()) {
            const double ds = quantum_dim(s, q);
            const double coeff = lr * ls / (dr * ds);
            for (IrrepLabel w : fuse_labels(r, s)) out[w] += coeff * quantum_dim(w, q);
        }
    }
    std::vector<WeightFunctional::Entry> entries(out.begin(), out.end());
    return WeightFunctional(std::move(entries));
}

WeightFunctional check_dual(const WeightFunctional& phi) { return phi; }

bool is_generating(const WeightFunctional& phi) {
    for (const auto& [s, w] : phi.entries())
        if (s.twice_spin % 2 == 1 && w > 0.0) return true;
    return false;
}

}  // namespace qwalk
