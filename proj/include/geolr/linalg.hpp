#ifndef GEOLR_LINALG_HPP
#define GEOLR_LINALG_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace geolr {

using Index = Eigen::Index;

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Largest dimension accepted by the dense SVD routines.
inline constexpr Index default_dense_guard = 10000;

inline void check_dense_size(Index rows, Index cols, Index guard)
{
    if (std::max(rows, cols) > guard)
        throw std::length_error("dense factorization exceeds the size guard; use the sampled error estimator");
}

template <typename Derived>
typename Derived::RealScalar max_norm(const Eigen::MatrixBase<Derived>& m)
{
    return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// column pivoted QR
// ---------------------------------------------------------------------------

template <typename Scalar>
struct PivotedQR
{
    DenseMatrix<Scalar> q;    ///< m x p, orthonormal columns, p = min(m, n)
    DenseMatrix<Scalar> r;    ///< p x n, upper triangular
    std::vector<Index> perm;  ///< M.col(perm[j]) is column j of Q R
};

/// M Pi = Q R with |diag R| nonincreasing.
template <typename Derived>
PivotedQR<typename Derived::Scalar> qr_column_pivoted(const Eigen::MatrixBase<Derived>& m)
{
    using Scalar = typename Derived::Scalar;
    if (m.size() == 0)
        throw std::invalid_argument("qr_column_pivoted: empty matrix");
    const Index p = std::min(m.rows(), m.cols());
    Eigen::ColPivHouseholderQR<DenseMatrix<Scalar>> qr(m.derived());
    PivotedQR<Scalar> out;
    out.q = qr.householderQ() * DenseMatrix<Scalar>::Identity(m.rows(), p);
    out.r = qr.matrixQR().topRows(p).template triangularView<Eigen::Upper>();
    const auto& ind = qr.colsPermutation().indices();
    out.perm.assign(ind.data(), ind.data() + ind.size());
    return out;
}

// ---------------------------------------------------------------------------
// interpolative decomposition
// ---------------------------------------------------------------------------

/// Row interpolative decomposition M ~ P [I; G] M(skeleton, :).
///
/// Row `redundant[j]` of M is approximated by coefficients.row(j) times the
/// skeleton rows. Every coefficient is bounded by `bound` in magnitude.
template <typename Scalar>
struct InterpolativeDecomposition
{
    std::vector<Index> skeleton;
    std::vector<Index> redundant;
    DenseMatrix<Scalar> coefficients; ///< G, redundant.size() x skeleton.size()
    Scalar bound = Scalar(2);
    Index swaps = 0;                  ///< bound-enforcing exchanges performed

    Index rank() const { return static_cast<Index>(skeleton.size()); }
    Index rows() const { return static_cast<Index>(skeleton.size() + redundant.size()); }

    /// skeleton followed by redundant rows: the row permutation P.
    std::vector<Index> permutation() const
    {
        std::vector<Index> p = skeleton;
        p.insert(p.end(), redundant.begin(), redundant.end());
        return p;
    }

    /// U = P [I; G], rows() x rank().
    DenseMatrix<Scalar> interpolation_matrix() const
    {
        DenseMatrix<Scalar> u = DenseMatrix<Scalar>::Zero(rows(), rank());
        for (Index i = 0; i < rank(); ++i)
            u(skeleton[static_cast<std::size_t>(i)], i) = Scalar(1);
        for (Index j = 0; j < static_cast<Index>(redundant.size()); ++j)
            u.row(redundant[static_cast<std::size_t>(j)]) = coefficients.row(j);
        return u;
    }
};

namespace detail {

// Exchange skeleton slot i with redundant slot j in the coefficient matrix T
// (skeleton x redundant, column j expresses redundant column j in the skeleton
// basis). Exact for columns inside the skeleton span.
template <typename Scalar>
void exchange(DenseMatrix<Scalar>& t, Index i, Index j)
{
    const Scalar piv = t(i, j);
    const DenseVector<Scalar> col = t.col(j);
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> row = t.row(i);
    t.noalias() -= col * (row / piv);
    t.row(i) = row / piv;
    t.col(j) = -col / piv;
    t(i, j) = Scalar(1) / piv;
}

template <typename Scalar>
bool first_violation(const DenseMatrix<Scalar>& t, Scalar bound, Index& vi, Index& vj)
{
    for (Index j = 0; j < t.cols(); ++j)
        for (Index i = 0; i < t.rows(); ++i)
            if (std::abs(t(i, j)) > bound) {
                vi = i;
                vj = j;
                return true;
            }
    return false;
}

} // namespace detail

/// Rank-k row interpolative decomposition with |G| <= s entrywise.
///
/// Column pivoted QR of M^T picks an initial skeleton; skeleton and redundant
/// rows are then exchanged while some coefficient exceeds s. Each exchange
/// multiplies |det| of the skeleton block by that coefficient, so the loop
/// terminates. If M has numerical rank below k, the surplus skeleton rows get
/// zero coefficients.
template <typename Derived>
InterpolativeDecomposition<typename Derived::Scalar>
interpolative_decomposition(const Eigen::MatrixBase<Derived>& m, Index k, typename Derived::Scalar s = 2)
{
    using Scalar = typename Derived::Scalar;
    const Index rows = m.rows();
    const Index cols = m.cols();
    if (k < 1 || k > std::min(rows, cols))
        throw std::invalid_argument("interpolative_decomposition: rank out of range");
    if (!(s > Scalar(1)))
        throw std::invalid_argument("interpolative_decomposition: bound must exceed 1");

    const DenseMatrix<Scalar> a = m.transpose();
    Eigen::ColPivHouseholderQR<DenseMatrix<Scalar>> qr(a);
    const auto& perm = qr.colsPermutation().indices();
    const auto& packed = qr.matrixQR();

    const Scalar r00 = std::abs(packed(0, 0));
    const Scalar tol = static_cast<Scalar>(std::max(rows, cols)) * std::numeric_limits<Scalar>::epsilon() * r00;
    Index k_eff = 0;
    while (k_eff < k && std::abs(packed(k_eff, k_eff)) > tol)
        ++k_eff;

    InterpolativeDecomposition<Scalar> id;
    id.bound = s;
    id.skeleton.assign(perm.data(), perm.data() + k);
    id.redundant.assign(perm.data() + k, perm.data() + rows);
    const Index nred = rows - k;

    DenseMatrix<Scalar> t(k_eff, nred);
    if (k_eff > 0 && nred > 0) {
        t = packed.block(0, k, k_eff, nred);
        packed.topLeftCorner(k_eff, k_eff).template triangularView<Eigen::Upper>().solveInPlace(t);
    }

    // Exchanges on the well-conditioned part of the skeleton, followed by an
    // exact recomputation of T; repeated in case rounding reintroduced a violation.
    constexpr int max_rounds = 16;
    const Index max_swaps = 4 * rows * std::max<Index>(k_eff, 1) + 64;
    for (int round = 0; round < max_rounds && k_eff > 0 && nred > 0; ++round) {
        Index vi = 0, vj = 0;
        bool any = false;
        while (detail::first_violation(t, s, vi, vj)) {
            any = true;
            detail::exchange(t, vi, vj);
            std::swap(id.skeleton[static_cast<std::size_t>(vi)], id.redundant[static_cast<std::size_t>(vj)]);
            if (++id.swaps > max_swaps)
                throw std::runtime_error("interpolative_decomposition: exchange loop did not terminate");
        }
        if (!any)
            break;
        DenseMatrix<Scalar> basis(cols, k_eff);
        DenseMatrix<Scalar> rest(cols, nred);
        for (Index i = 0; i < k_eff; ++i)
            basis.col(i) = a.col(id.skeleton[static_cast<std::size_t>(i)]);
        for (Index j = 0; j < nred; ++j)
            rest.col(j) = a.col(id.redundant[static_cast<std::size_t>(j)]);
        t = basis.householderQr().solve(rest);
    }
    if (k_eff > 0 && nred > 0 && max_norm(t) > s)
        throw std::runtime_error("interpolative_decomposition: coefficient bound not reached");

    id.coefficients = DenseMatrix<Scalar>::Zero(nred, k);
    if (k_eff > 0 && nred > 0)
        id.coefficients.leftCols(k_eff) = t.transpose();
    return id;
}

// ---------------------------------------------------------------------------
// pseudoinverses
// ---------------------------------------------------------------------------

/// M^+ ~ left * right with left = V_k S_k^{-1} (cols x k) and right = U_k^T (k x rows).
template <typename Scalar>
struct PseudoInverseFactors
{
    DenseMatrix<Scalar> left;
    DenseMatrix<Scalar> right;
    Scalar threshold = 0;   ///< absolute singular value cutoff
    Scalar sigma_min = 0;   ///< smallest retained singular value
    Index rank = 0;

    DenseMatrix<Scalar> matrix() const { return left * right; }
};

/// SVD pseudoinverse dropping singular values <= rel_threshold * sigma_max.
/// A negative threshold selects the usual max(m, n) * eps cutoff.
template <typename Derived>
PseudoInverseFactors<typename Derived::Scalar> pseudo_inverse(const Eigen::MatrixBase<Derived>& m,
                                                              typename Derived::Scalar rel_threshold = -1)
{
    using Scalar = typename Derived::Scalar;
    PseudoInverseFactors<Scalar> out;
    if (rel_threshold < Scalar(0))
        rel_threshold = static_cast<Scalar>(std::max(m.rows(), m.cols())) * std::numeric_limits<Scalar>::epsilon();
    if (m.size() == 0) {
        out.left.resize(m.cols(), 0);
        out.right.resize(0, m.rows());
        return out;
    }
    Eigen::BDCSVD<DenseMatrix<Scalar>> svd(m.derived(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    out.threshold = rel_threshold * (sv.size() ? sv(0) : Scalar(0));
    Index k = 0;
    while (k < sv.size() && sv(k) > out.threshold && sv(k) > Scalar(0))
        ++k;
    out.rank = k;
    out.sigma_min = k ? sv(k - 1) : Scalar(0);
    out.left = svd.matrixV().leftCols(k) * sv.head(k).cwiseInverse().asDiagonal();
    out.right = svd.matrixU().leftCols(k).transpose();
    return out;
}

/// QR-based truncated pseudoinverse: M = Q R, R^+_eps from the SVD of R with
/// singular values below eps * sigma_max dropped. The operator is R^+_eps Q^T.
template <typename Scalar>
struct TruncatedPinv
{
    DenseMatrix<Scalar> q;       ///< rows x p
    DenseMatrix<Scalar> r_pinv;  ///< cols x p
    Scalar epsilon = 0;
    Index effective_rank = 0;
    /// R^+_eps Q^T = left * right, with left cols x k and right k x rows.
    DenseMatrix<Scalar> left;
    DenseMatrix<Scalar> right;

    DenseMatrix<Scalar> matrix() const { return r_pinv * q.transpose(); }
};

template <typename Derived>
TruncatedPinv<typename Derived::Scalar> truncated_pinv(const Eigen::MatrixBase<Derived>& m,
                                                       typename Derived::Scalar epsilon = 1e-10)
{
    using Scalar = typename Derived::Scalar;
    if (epsilon < Scalar(0))
        throw std::invalid_argument("truncated_pinv: epsilon must be nonnegative");
    TruncatedPinv<Scalar> out;
    out.epsilon = epsilon;
    const Index p = std::min(m.rows(), m.cols());
    Eigen::HouseholderQR<DenseMatrix<Scalar>> qr(m.derived());
    out.q = qr.householderQ() * DenseMatrix<Scalar>::Identity(m.rows(), p);
    const DenseMatrix<Scalar> r = qr.matrixQR().topRows(p).template triangularView<Eigen::Upper>();
    const PseudoInverseFactors<Scalar> rp = pseudo_inverse(r, epsilon);
    out.effective_rank = rp.rank;
    out.r_pinv = rp.left * rp.right;
    out.left = rp.left;
    out.right = rp.right * out.q.transpose();
    return out;
}

// ---------------------------------------------------------------------------
// SVD and norms
// ---------------------------------------------------------------------------

template <typename Scalar>
struct Svd
{
    DenseMatrix<Scalar> u;
    DenseVector<Scalar> sigma;
    DenseMatrix<Scalar> v;
};

template <typename Derived>
Svd<typename Derived::Scalar> svd_dense(const Eigen::MatrixBase<Derived>& m, Index guard = default_dense_guard)
{
    using Scalar = typename Derived::Scalar;
    check_dense_size(m.rows(), m.cols(), guard);
    Eigen::BDCSVD<DenseMatrix<Scalar>> svd(m.derived(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

template <typename Derived>
DenseVector<typename Derived::Scalar> singular_values(const Eigen::MatrixBase<Derived>& m,
                                                      Index guard = default_dense_guard)
{
    using Scalar = typename Derived::Scalar;
    check_dense_size(m.rows(), m.cols(), guard);
    if (m.size() == 0)
        return DenseVector<Scalar>();
    Eigen::BDCSVD<DenseMatrix<Scalar>> svd(m.derived());
    return svd.singularValues();
}

/// Largest singular value. Small matrices go through the SVD; larger ones use
/// Golub-Kahan-Lanczos bidiagonalization with full reorthogonalization, run
/// until the leading Ritz value is stationary to working precision.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& m, Index guard = default_dense_guard)
{
    using Scalar = typename Derived::Scalar;
    check_dense_size(m.rows(), m.cols(), guard);
    const Index p = std::min(m.rows(), m.cols());
    if (p == 0)
        return Scalar(0);
    if (p <= 64) {
        const auto sv = singular_values(m, guard);
        return sv(0);
    }
    const auto& a = m.derived();
    const Index n = m.cols();
    DenseMatrix<Scalar> vs(n, p), us(m.rows(), p);
    DenseVector<Scalar> v(n);
    for (Index i = 0; i < n; ++i)
        v(i) = Scalar(1) + Scalar(0.5) * std::sin(Scalar(1.7) * static_cast<Scalar>(i) + Scalar(0.3));
    v.normalize();
    // B is upper bidiagonal (alphas, betas); its singular values are the square
    // roots of the eigenvalues of the tridiagonal B^T B.
    DenseVector<Scalar> alphas(p), betas(p);
    auto leading = [&](Index len) {
        DenseVector<Scalar> diag(len), sub(std::max<Index>(len - 1, 0));
        for (Index i = 0; i < len; ++i)
            diag(i) = alphas(i) * alphas(i) + (i > 0 ? betas(i - 1) * betas(i - 1) : Scalar(0));
        for (Index i = 0; i + 1 < len; ++i)
            sub(i) = alphas(i) * betas(i);
        Eigen::SelfAdjointEigenSolver<DenseMatrix<Scalar>> es;
        es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
        return std::sqrt(std::max(es.eigenvalues()(len - 1), Scalar(0)));
    };
    Scalar beta = 0;
    Scalar last = -1;
    int stable = 0;
    for (Index j = 0; j < p; ++j) {
        vs.col(j) = v;
        DenseVector<Scalar> u = a * v;
        if (j > 0)
            u -= beta * us.col(j - 1);
        for (int pass = 0; pass < 2; ++pass)
            u -= us.leftCols(j) * (us.leftCols(j).transpose() * u);
        const Scalar alpha = u.norm();
        alphas(j) = alpha;
        if (alpha == Scalar(0))
            return j == 0 ? Scalar(0) : leading(j);
        us.col(j) = u / alpha;
        DenseVector<Scalar> w = a.transpose() * us.col(j) - alpha * v;
        for (int pass = 0; pass < 2; ++pass)
            w -= vs.leftCols(j + 1) * (vs.leftCols(j + 1).transpose() * w);
        beta = w.norm();
        betas(j) = Scalar(0);

        const Scalar est = leading(j + 1);
        if (last >= Scalar(0) && std::abs(est - last) <= Scalar(4) * std::numeric_limits<Scalar>::epsilon() * est)
            ++stable;
        else
            stable = 0;
        last = est;
        if (stable >= 3 || beta <= std::numeric_limits<Scalar>::epsilon() * est || j + 1 == p)
            return est;
        betas(j) = beta;
        v = w / beta;
    }
    return last;
}

/// sigma_{r+1} / sigma_1: the best relative 2-norm error of any rank-r approximation.
template <typename Derived>
typename Derived::Scalar best_rank_r_error(const Eigen::MatrixBase<Derived>& m, Index r,
                                           Index guard = default_dense_guard)
{
    using Scalar = typename Derived::Scalar;
    const auto sv = singular_values(m, guard);
    if (sv.size() == 0 || sv(0) == Scalar(0) || r >= sv.size())
        return Scalar(0);
    return sv(r) / sv(0);
}

} // namespace geolr

#endif // GEOLR_LINALG_HPP
