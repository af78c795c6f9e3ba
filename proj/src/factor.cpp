#include "geolr/factor.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "geolr/rng.hpp"

namespace geolr {

const char* to_string(FactorMethod m)
{
    switch (m) {
    case FactorMethod::TwoSided: return "two-sided";
    case FactorMethod::OneSided: return "one-sided";
    case FactorMethod::Symmetric: return "symmetric";
    case FactorMethod::Aca: return "aca";
    }
    return "?";
}

Eigen::VectorXd LowRankFactorization::apply(const Eigen::VectorXd& v) const
{
    Eigen::VectorXd t = right * v;
    if (core.size() > 0)
        t = core * t;
    return left * t;
}

Eigen::VectorXd LowRankFactorization::apply_transpose(const Eigen::VectorXd& v) const
{
    Eigen::VectorXd t = left.transpose() * v;
    if (core.size() > 0)
        t = core.transpose() * t;
    return right.transpose() * t;
}

Eigen::MatrixXd LowRankFactorization::dense() const
{
    if (rank() == 0)
        return Eigen::MatrixXd::Zero(rows(), cols());
    if (core.size() == 0)
        return left * right;
    Eigen::MatrixXd m = left * (core * right);
    if (method == FactorMethod::Symmetric)
        return 0.5 * (m + m.transpose());
    return m;
}

LowRankFactorization two_sided(const KernelMatrix& k, const SubsetSelection& s1, const SubsetSelection& s2,
                               const TwoSidedOptions& options)
{
    if (s1.indices.empty() || s2.indices.empty())
        throw std::invalid_argument("two_sided: subsets must be nonempty");
    s1.validate(k.row_points());
    s2.validate(k.col_points());

    const Eigen::MatrixXd c = k.cols_block(s2.indices);
    const Eigen::MatrixXd w = k.block(s1.indices, s2.indices);
    const Eigen::MatrixXd r = k.rows_block(s1.indices);

    LowRankFactorization f;
    f.method = FactorMethod::TwoSided;
    f.row_sample = s1.indices;
    f.col_sample = s2.indices;
    if (options.stabilize) {
        const auto tp = truncated_pinv(w, options.epsilon);
        f.left = c * tp.left;
        f.right = tp.right * r;
        f.stabilization = StabilizationRecord{options.epsilon, tp.effective_rank};
    } else {
        const auto pi = pseudo_inverse(w);
        f.left = c * pi.left;
        f.right = pi.right * r;
    }
    return f;
}

LowRankFactorization one_sided_from_sample(const KernelMatrix& k, SampleSide side, const SubsetSelection& sample,
                                           Index rank, double id_bound)
{
    const KernelMatrix kk = side == SampleSide::SampleY ? k : k.transposed();
    sample.validate(kk.col_points());
    if (rank < 1 || rank > sample.size())
        throw std::invalid_argument("one_sided: rank exceeds the sample size");
    if (rank > kk.rows())
        throw std::invalid_argument("one_sided: rank exceeds the number of rows");

    const Eigen::MatrixXd b = kk.cols_block(sample.indices);
    const auto id = interpolative_decomposition(b, rank, id_bound);
    Eigen::MatrixXd u = id.interpolation_matrix();
    Eigen::MatrixXd ki = kk.rows_block(id.skeleton);

    LowRankFactorization f;
    f.method = FactorMethod::OneSided;
    f.skeleton = id.skeleton;
    if (side == SampleSide::SampleY) {
        f.left = std::move(u);
        f.right = std::move(ki);
        f.col_sample = sample.indices;
    } else {
        f.left = ki.transpose();
        f.right = u.transpose();
        f.row_sample = sample.indices;
    }
    return f;
}

namespace {

Index sample_size(double oversample, Index rank, Index available)
{
    if (!(oversample >= 1.0))
        throw std::invalid_argument("oversample factor must be at least 1");
    const auto want = static_cast<Index>(std::ceil(oversample * static_cast<double>(rank) - 1e-9));
    return std::min(want, available);
}

} // namespace

LowRankFactorization one_sided(const KernelMatrix& k, const OneSidedOptions& options)
{
    if (options.rank < 1)
        throw std::invalid_argument("one_sided: rank must be positive");
    const PointSet& pool = options.side == SampleSide::SampleY ? k.col_points() : k.row_points();
    SelectorConfig cfg = options.selector;
    cfg.sample_count = sample_size(options.oversample, options.rank, pool.size());
    return one_sided_from_sample(k, options.side, select(pool, cfg), options.rank, options.id_bound);
}

LowRankFactorization symmetric_from_sample(const KernelMatrix& k, const SubsetSelection& sample, Index rank,
                                           double id_bound)
{
    if (!k.symmetric())
        throw std::invalid_argument("symmetric: needs X = Y and a symmetric kernel");
    sample.validate(k.col_points());
    if (rank < 1 || rank > sample.size())
        throw std::invalid_argument("symmetric: rank exceeds the sample size");

    const Eigen::MatrixXd b = k.cols_block(sample.indices);
    const auto id = interpolative_decomposition(b, rank, id_bound);

    LowRankFactorization f;
    f.method = FactorMethod::Symmetric;
    f.left = id.interpolation_matrix();
    f.core = k.block(id.skeleton, id.skeleton);
    f.right = f.left.transpose();
    f.skeleton = id.skeleton;
    f.row_sample = sample.indices;
    f.col_sample = sample.indices;
    return f;
}

LowRankFactorization symmetric(const KernelMatrix& k, const SymmetricOptions& options)
{
    if (options.rank < 1)
        throw std::invalid_argument("symmetric: rank must be positive");
    SelectorConfig cfg = options.selector;
    cfg.sample_count = sample_size(options.oversample, options.rank, k.col_points().size());
    return symmetric_from_sample(k, select(k.col_points(), cfg), options.rank, options.id_bound);
}

LowRankFactorization aca(const KernelMatrix& k, const AcaOptions& options)
{
    if (options.rank < 1)
        throw std::invalid_argument("aca: rank must be positive");
    const Index m = k.rows();
    const Index n = k.cols();
    const Index rmax = std::min({options.rank, m, n});

    Index i = options.start_row;
    if (options.start == AcaStart::FarthestFromCentroid) {
        const Eigen::RowVectorXd c = k.col_points().centroid();
        double best = -1.0;
        for (Index a = 0; a < m; ++a) {
            const double d = squared_distance(k.row_points().point(a), c);
            if (d > best) {
                best = d;
                i = a;
            }
        }
    } else if (i < 0 || i >= m) {
        throw std::invalid_argument("aca: start row out of range");
    }

    Eigen::MatrixXd u(m, rmax);
    Eigen::MatrixXd v(rmax, n);
    std::vector<char> used_rows(static_cast<std::size_t>(m), 0);
    std::vector<char> used_cols(static_cast<std::size_t>(n), 0);
    std::vector<Index> pivot_rows, pivot_cols;
    double first_pivot = 0.0;
    Index got = 0;
    bool stopped = false;
    for (; got < rmax; ++got) {
        Eigen::RowVectorXd row = k.row(i).transpose();
        if (got > 0)
            row.noalias() -= u.row(i).head(got) * v.topRows(got);
        used_rows[static_cast<std::size_t>(i)] = 1;

        Index j = -1;
        double best = -1.0;
        for (Index c = 0; c < n; ++c)
            if (!used_cols[static_cast<std::size_t>(c)] && std::abs(row(c)) > best) {
                best = std::abs(row(c));
                j = c;
            }
        const double pivot = j >= 0 ? row(j) : 0.0;
        if (got == 0)
            first_pivot = std::abs(pivot);
        if (pivot == 0.0 || std::abs(pivot) <= 64.0 * std::numeric_limits<double>::epsilon() * first_pivot) {
            stopped = true;
            break;
        }
        used_cols[static_cast<std::size_t>(j)] = 1;
        pivot_rows.push_back(i);
        pivot_cols.push_back(j);
        v.row(got) = row / pivot;
        Eigen::VectorXd col = k.col(j);
        if (got > 0)
            col.noalias() -= u.leftCols(got) * v.col(j).head(got);
        u.col(got) = col;

        Index next = -1;
        best = -1.0;
        for (Index a = 0; a < m; ++a)
            if (!used_rows[static_cast<std::size_t>(a)] && std::abs(col(a)) > best) {
                best = std::abs(col(a));
                next = a;
            }
        if (next < 0) {
            ++got;
            break;
        }
        i = next;
    }

    LowRankFactorization f;
    f.method = FactorMethod::Aca;
    f.left = u.leftCols(got);
    f.right = v.topRows(got);
    f.row_sample = std::move(pivot_rows);
    f.col_sample = std::move(pivot_cols);
    f.stopped_early = stopped;
    return f;
}

ErrorPair evaluate_errors(const LowRankFactorization& f, const Eigen::MatrixXd& dense_k)
{
    const Eigen::MatrixXd d = dense_k - f.dense();
    ErrorPair e;
    e.max_abs = max_norm(d);
    const double nk = spectral_norm(dense_k, std::numeric_limits<Index>::max());
    const double nd = spectral_norm(d, std::numeric_limits<Index>::max());
    e.rel2 = nk > 0.0 ? nd / nk : (nd > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    return e;
}

double evaluate_error(const LowRankFactorization& f, const KernelMatrix& k, ErrorNorm norm, Index guard)
{
    check_dense_size(k.rows(), k.cols(), guard);
    const Eigen::MatrixXd dk = k.dense(std::numeric_limits<double>::infinity());
    if (norm == ErrorNorm::MaxNorm)
        return max_norm(dk - f.dense());
    return evaluate_errors(f, dk).rel2;
}

double estimate_rel2_error(const LowRankFactorization& f, const KernelMatrix& k, std::uint64_t seed, int iterations,
                           Index block_rows)
{
    const Index m = k.rows();
    const Index n = k.cols();
    Rng rng(seed);
    Eigen::VectorXd vd(n), vk(n);
    for (Index j = 0; j < n; ++j) {
        vd(j) = rng.normal();
        vk(j) = rng.normal();
    }
    vd.normalize();
    vk.normalize();

    std::vector<Index> cols(static_cast<std::size_t>(n));
    std::iota(cols.begin(), cols.end(), Index{0});
    double est_d = 0.0, est_k = 0.0;
    for (int it = 0; it < iterations; ++it) {
        const Eigen::VectorXd fv = f.apply(vd);
        Eigen::VectorXd dv(m);
        Eigen::VectorXd kw(m);
        Eigen::VectorXd zk = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd zd = Eigen::VectorXd::Zero(n);
        for (Index r0 = 0; r0 < m; r0 += block_rows) {
            const Index nb = std::min(block_rows, m - r0);
            std::vector<Index> rows(static_cast<std::size_t>(nb));
            std::iota(rows.begin(), rows.end(), r0);
            const Eigen::MatrixXd kb = k.block(rows, cols);
            dv.segment(r0, nb) = kb * vd - fv.segment(r0, nb);
            kw.segment(r0, nb) = kb * vk;
            zd.noalias() += kb.transpose() * dv.segment(r0, nb);
            zk.noalias() += kb.transpose() * kw.segment(r0, nb);
        }
        zd -= f.apply_transpose(dv);
        est_d = dv.norm();
        est_k = kw.norm();
        if (zd.norm() == 0.0 || zk.norm() == 0.0)
            break;
        vd = zd.normalized();
        vk = zk.normalized();
    }
    return est_k > 0.0 ? est_d / est_k : 0.0;
}

} // namespace geolr
