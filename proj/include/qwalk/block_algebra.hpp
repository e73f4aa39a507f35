#pragma once

#include <array>
#include <map>
#include <mutex>
#include <tuple>

#include "qwalk/fusion.hpp"
#include "qwalk/linalg.hpp"

namespace qwalk {

/// Generator images on one block, basis xi_i ordered by ascending i = -s..s.
/// K is diag(q^{-i}), E is the superdiagonal lowering matrix of e, F = E^T.
struct RepMatrices {
    IrrepLabel s;
    Matrix e, f, k, k_inv;
};

RepMatrices rep_matrices(IrrepLabel s, double q);

/// Diagonal of pi_s(rho^power); rho = k^{-2} has entries q^{2i}.
Vector rho_diag(IrrepLabel s, double q, double power);

/// An element of the direct sum of matrix blocks, finitely many blocks present.
class BlockElement {
public:
    BlockElement() = default;

    const std::map<int, Matrix>& blocks() const noexcept { return blocks_; }
    const Matrix* find(int twice_spin) const noexcept;
    void set(IrrepLabel s, Matrix m);
    void add(IrrepLabel s, const Matrix& m);
    bool empty() const noexcept { return blocks_.empty(); }
    int max_twice_spin() const noexcept;
    double sup_norm() const;  // max over blocks of the operator norm

    BlockElement& operator+=(const BlockElement& other);
    BlockElement& operator-=(const BlockElement& other);
    BlockElement& operator*=(double scale);

    /// Identity on every block with twice-spin <= cutoff.
    static BlockElement identity(int cutoff_twice_spin, double scale = 1.0);
    /// I_s on a single block.
    static BlockElement unit_block(IrrepLabel s);
    /// value * m^s_{ij}, indices given as basis positions 0..2s.
    static BlockElement matrix_unit(IrrepLabel s, int row, int col, double value);

    /// Drop blocks above the cutoff (returns the number removed).
    int truncate(int cutoff_twice_spin);

private:
    std::map<int, Matrix> blocks_;
};

/// The chi-generators on one block together with the eigenvalue lambda_s of
/// the central element relating them to the normalized sphere generators.
struct ChiElements {
    IrrepLabel s;
    Matrix chi_minus, chi_zero, chi_plus;  // chi_{-1}, chi_0, chi_1
    double lambda = 0.0;
};

ChiElements chi_elements(IrrepLabel s, double q);

/// Sphere parameter c(s) = -(q^{2s+1} + q^{-2s-1})^{-2}.
double podles_c(IrrepLabel s, double q);

/// Operator-norm residuals of the three defining sphere relations on the
/// normalized generators X_j = lambda_s^{-1} pi_s(chi_j).
struct PodlesResiduals {
    double mixed_commutation = 0.0;  // q X1 X0 - q^{-1} X0 X1 = (q^{-1}-q) X1
    double reflection = 0.0;         // (q^{-1}-q) X0^2 + X_{-1}X_1 - X_1 X_{-1} = -(q^{-1}-q) X0
    double radius = 0.0;             // X0^2 + X_{-1}*X_{-1} + X_1*X_1 = (1 + (q+q^{-1})^2 c) 1

    double max() const noexcept;
};

PodlesResiduals podles_residuals(IrrepLabel s, double q);

enum class Generator { e, f, k };

/// Blockwise adjoint action: ad k(x) = k^{-1} x k,
/// ad e(x) = -q^{-1} e x k^{-1} + k^{-1} x e, ad f(x) = -q f x k^{-1} + k^{-1} x f.
BlockElement adjoint_action(Generator g, const BlockElement& x, double q);

/// Haar-weight pairing sum_s d_s Tr(x_s rho^{-1/2} y_s^T rho^{1/2} rho^{-1}).
double haar_pairing(const BlockElement& x, const BlockElement& y, double q);

/// The Clebsch-Gordan isometry H_w -> H_r (x) H_t with orthonormal columns,
/// rows indexed by the composite (a,b) -> a*(2t+1)+b.
struct CGIsometry {
    IrrepLabel r, t, w;
    Matrix v;
};

/// Builds the isometry: the column for pi_w-index -w is the unit kernel
/// vector of the coproduct raising operator on the matching weight space
/// (sign fixed so the smallest first-factor index has positive coefficient);
/// the remaining columns follow by the normalized lowering recursion.
CGIsometry cg_isometry(IrrepLabel r, IrrepLabel t, IrrepLabel w, double q);

/// Memo table of CG isometries for a fixed q, guarded by a single-writer lock.
class CGCache {
public:
    explicit CGCache(double q);
    double q() const noexcept { return q_; }
    const Matrix& isometry(IrrepLabel r, IrrepLabel t, IrrepLabel w);

private:
    double q_;
    std::map<std::tuple<int, int, int>, Matrix> memo_;
    std::mutex mutex_;
};

/// The B(H_r) (x) B(H_t) component of the coproduct of a block-w matrix:
/// V x V^T, or zero when w does not occur in the fusion of r and t.
Matrix coproduct_block(const Matrix& x_w, IrrepLabel w, IrrepLabel r, IrrepLabel t, CGCache& cg);

/// Relative residual of pi_s(chi_0) = -lambda_s + (q sqrt([2]_q)/(q-q^{-1})) k^2,
/// scaled by max(1, norm of the k^2 term).
double chi0_identity_residual(IrrepLabel s, double q);

/// Residuals of the spin-1 transformation law of the normalized generators
/// under ad e, ad f, ad k against the pi_1 coefficient matrix (row convention
/// of the antirepresentation). Returns the max over the nine combinations.
double adjoint_spin1_residual(IrrepLabel s, double q);

}  // namespace qwalk
