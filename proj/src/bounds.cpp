#include "geolr/bounds.hpp"

#include <algorithm>
#include <stdexcept>

namespace geolr {

const char* to_string(BoundKind k)
{
    switch (k) {
    case BoundKind::Lemma21: return "lemma21";
    case BoundKind::Thm22Entrywise: return "thm22-entrywise";
    case BoundKind::Thm23MaxNorm: return "thm23-maxnorm";
    case BoundKind::Cor24ColumnProjection: return "cor24-column-projection";
    case BoundKind::Cor24RowProjection: return "cor24-row-projection";
    case BoundKind::Thm25Geometric: return "thm25-geometric";
    case BoundKind::Thm33OneSided: return "thm33-one-sided";
    case BoundKind::Thm34OneSidedGeometric: return "thm34-one-sided-geometric";
    }
    return "?";
}

nlohmann::json to_json(const BoundReport& r)
{
    nlohmann::json j;
    j["bound"] = to_string(r.kind);
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["holds"] = r.holds();
    nlohmann::json terms = nlohmann::json::object();
    for (const auto& [name, value] : r.terms) {
        if (std::isfinite(value))
            terms[name] = value;
        else
            terms[name] = value > 0 ? "inf" : "nan";
    }
    j["terms"] = terms;
    if (r.error)
        j["error"] = *r.error;
    return j;
}

BoundReport lemma21_check(const Eigen::MatrixXd& a, const Eigen::VectorXd& alpha, const Eigen::VectorXd& alpha_hat,
                          const Eigen::VectorXd& beta, const Eigen::VectorXd& beta_hat)
{
    if (alpha.size() != a.rows() || alpha_hat.size() != a.rows() || beta.size() != a.cols() ||
        beta_hat.size() != a.cols())
        throw std::invalid_argument("lemma21_check: shape mismatch");
    BoundReport r;
    r.kind = BoundKind::Lemma21;
    const double e1 = (alpha_hat - alpha).norm();
    const double e2 = (beta_hat - beta).norm();
    const double na = spectral_norm(a, std::numeric_limits<Index>::max());
    const double left = (alpha.transpose() * a).norm();
    const double right = (a * beta).norm();
    r.lhs = std::abs(alpha_hat.dot(a * beta_hat) - alpha.dot(a * beta));
    r.rhs = left * e2 + right * e1 + na * e1 * e2;
    r.terms = {{"eps1", e1}, {"eps2", e2}, {"norm_A", na}, {"norm_alphaT_A", left}, {"norm_A_beta", right}};
    return r;
}

namespace {

Eigen::MatrixXd pairwise_distances(const PointSet& a, const PointSet& b)
{
    Eigen::MatrixXd d(a.size(), b.size());
    for (Index j = 0; j < b.size(); ++j)
        for (Index i = 0; i < a.size(); ++i)
            d(i, j) = distance(a.point(i), b.point(j));
    return d;
}

/// ||K_{Xy} - K_{Xv}|| for every column y and every v in `cols`.
Eigen::MatrixXd column_differences(const Eigen::MatrixXd& k, const std::vector<Index>& cols)
{
    Eigen::MatrixXd out(k.cols(), static_cast<Index>(cols.size()));
    for (Index b = 0; b < out.cols(); ++b)
        for (Index y = 0; y < k.cols(); ++y)
            out(y, b) = (k.col(y) - k.col(cols[static_cast<std::size_t>(b)])).norm();
    return out;
}

Eigen::MatrixXd row_differences(const Eigen::MatrixXd& k, const std::vector<Index>& rows)
{
    Eigen::MatrixXd out(k.rows(), static_cast<Index>(rows.size()));
    for (Index a = 0; a < out.cols(); ++a)
        for (Index x = 0; x < k.rows(); ++x)
            out(x, a) = (k.row(x) - k.row(rows[static_cast<std::size_t>(a)])).norm();
    return out;
}

void guard_sizes(const KernelMatrix& k, Index guard)
{
    if (k.rows() > guard || k.cols() > guard)
        throw std::length_error("bound checks are limited to " + std::to_string(guard) + " rows and columns");
}

void flag_infinite(BoundReport& r, const LipschitzValue& l, const char* name)
{
    r.terms[name] = l.get();
    if (l.infinite)
        r.error = std::string("discrete Lipschitz constant ") + name +
                  " is infinite: coincident points carry different kernel values";
}

} // namespace

std::vector<BoundReport> check_two_sided(const KernelMatrix& k, const SubsetSelection& s1, const SubsetSelection& s2,
                                         Index guard)
{
    guard_sizes(k, guard);
    const auto f = two_sided(k, s1, s2);
    const Eigen::MatrixXd kd = k.dense();
    const Eigen::MatrixXd err = (kd - f.dense()).cwiseAbs();
    const double lhs = err.maxCoeff();
    const Index m = kd.rows();
    const Index n = kd.cols();
    const auto& i1 = s1.indices;
    const auto& i2 = s2.indices;
    const auto r1 = static_cast<Index>(i1.size());
    const auto r2 = static_cast<Index>(i2.size());

    const Eigen::MatrixXd w = k.block(i1, i2);
    const auto pinv = pseudo_inverse(w);
    const double pinv_norm = pinv.rank > 0 ? 1.0 / pinv.sigma_min : 0.0;

    // eps1(x, a) = ||K_{x S2} - K_{u_a S2}||, eps2(y, b) = ||K_{S1 y} - K_{S1 v_b}||
    Eigen::MatrixXd eps1(m, r1), eps2(n, r2);
    const Eigen::MatrixXd kxs2 = k.cols_block(i2);
    const Eigen::MatrixXd ks1y = k.rows_block(i1);
    for (Index a = 0; a < r1; ++a)
        for (Index x = 0; x < m; ++x)
            eps1(x, a) = (kxs2.row(x) - kxs2.row(i1[static_cast<std::size_t>(a)])).norm();
    for (Index b = 0; b < r2; ++b)
        for (Index y = 0; y < n; ++y)
            eps2(y, b) = (ks1y.col(y) - ks1y.col(i2[static_cast<std::size_t>(b)])).norm();

    // Entrywise bound with the joint minimum over (u, v).
    double rhs23 = 0.0;
    double worst = -std::numeric_limits<double>::infinity();
    Index wx = 0, wy = 0, wa = 0, wb = 0;
    double w_rhs = 0.0;
    for (Index y = 0; y < n; ++y)
        for (Index x = 0; x < m; ++x) {
            double best = std::numeric_limits<double>::infinity();
            Index ba = 0, bb = 0;
            for (Index b = 0; b < r2; ++b)
                for (Index a = 0; a < r1; ++a) {
                    const double e1 = eps1(x, a);
                    const double e2 = eps2(y, b);
                    const double v = std::abs(kd(x, y) - w(a, b)) + e1 + e2 + pinv_norm * e1 * e2;
                    if (v < best) {
                        best = v;
                        ba = a;
                        bb = b;
                    }
                }
            rhs23 = std::max(rhs23, best);
            const double margin = (err(x, y) - best) / (1.0 + best);
            if (margin > worst) {
                worst = margin;
                wx = x;
                wy = y;
                wa = ba;
                wb = bb;
                w_rhs = best;
            }
        }

    std::vector<BoundReport> out;
    {
        const Eigen::MatrixXd a = pinv.matrix();
        const Index u = i1[static_cast<std::size_t>(wa)];
        const Index v = i2[static_cast<std::size_t>(wb)];
        BoundReport r = lemma21_check(a, kxs2.row(u).transpose(), kxs2.row(wx).transpose(), ks1y.col(v),
                                      ks1y.col(wy));
        r.terms["row"] = static_cast<double>(wx);
        r.terms["col"] = static_cast<double>(wy);
        out.push_back(std::move(r));
    }
    {
        BoundReport r;
        r.kind = BoundKind::Thm22Entrywise;
        r.lhs = err(wx, wy);
        r.rhs = w_rhs;
        r.terms = {{"row", static_cast<double>(wx)},
                   {"col", static_cast<double>(wy)},
                   {"u", static_cast<double>(i1[static_cast<std::size_t>(wa)])},
                   {"v", static_cast<double>(i2[static_cast<std::size_t>(wb)])},
                   {"eps1", eps1(wx, wa)},
                   {"eps2", eps2(wy, wb)},
                   {"pinv_norm", pinv_norm}};
        out.push_back(std::move(r));
    }
    {
        BoundReport r;
        r.kind = BoundKind::Thm23MaxNorm;
        r.lhs = lhs;
        r.rhs = rhs23;
        r.terms = {{"pinv_norm", pinv_norm}, {"r1", double(r1)}, {"r2", double(r2)}};
        out.push_back(std::move(r));
    }

    // Projection estimates: S1 = X for the column form, S2 = Y for the row form.
    {
        const auto p = pseudo_inverse(kxs2);
        const Eigen::MatrixXd proj = kxs2 * (p.matrix() * kd);
        const Eigen::MatrixXd cd = column_differences(kd, i2);
        double rhs = 0.0;
        for (Index y = 0; y < n; ++y)
            for (Index x = 0; x < m; ++x) {
                double best = std::numeric_limits<double>::infinity();
                for (Index b = 0; b < r2; ++b)
                    best = std::min(best, std::abs(kd(x, y) - kxs2(x, b)) + cd(y, b));
                rhs = std::max(rhs, best);
            }
        BoundReport r;
        r.kind = BoundKind::Cor24ColumnProjection;
        r.lhs = max_norm(kd - proj);
        r.rhs = rhs;
        r.terms = {{"r2", double(r2)}};
        out.push_back(std::move(r));
    }
    {
        const auto p = pseudo_inverse(ks1y);
        const Eigen::MatrixXd proj = (kd * p.matrix()) * ks1y;
        const Eigen::MatrixXd rd = row_differences(kd, i1);
        double rhs = 0.0;
        for (Index y = 0; y < n; ++y)
            for (Index x = 0; x < m; ++x) {
                double best = std::numeric_limits<double>::infinity();
                for (Index a = 0; a < r1; ++a)
                    best = std::min(best, std::abs(kd(x, y) - ks1y(a, y)) + rd(x, a));
                rhs = std::max(rhs, best);
            }
        BoundReport r;
        r.kind = BoundKind::Cor24RowProjection;
        r.lhs = max_norm(kd - proj);
        r.rhs = rhs;
        r.terms = {{"r1", double(r1)}};
        out.push_back(std::move(r));
    }

    // Geometric form.
    {
        const PointSet& xs = k.row_points();
        const PointSet& ys = k.col_points();
        const Eigen::MatrixXd dx = pairwise_distances(xs, xs.subset(i1));
        const Eigen::MatrixXd dy = pairwise_distances(ys, ys.subset(i2));
        const double delta1 = dx.rowwise().minCoeff().maxCoeff();
        const double delta2 = dy.rowwise().minCoeff().maxCoeff();

        LipschitzValue lj, lx, ly;
        for (Index y = 0; y < n; ++y)
            for (Index x = 0; x < m; ++x)
                for (Index b = 0; b < r2; ++b)
                    for (Index a = 0; a < r1; ++a)
                        lj.add(std::abs(kd(x, y) - w(a, b)), std::hypot(dx(x, a), dy(y, b)));
        // L(X, S1)_{S2}
        for (Index b = 0; b < r2; ++b)
            for (Index x = 0; x < m; ++x)
                for (Index a = 0; a < r1; ++a)
                    lx.add(std::abs(kxs2(x, b) - w(a, b)), dx(x, a));
        // L(Y, S2)_{S1}
        for (Index a = 0; a < r1; ++a)
            for (Index y = 0; y < n; ++y)
                for (Index b = 0; b < r2; ++b)
                    ly.add(std::abs(ks1y(a, y) - w(a, b)), dy(y, b));

        BoundReport r;
        r.kind = BoundKind::Thm25Geometric;
        r.lhs = lhs;
        flag_infinite(r, lj, "L_joint");
        flag_infinite(r, lx, "L_X_S1_at_S2");
        flag_infinite(r, ly, "L_Y_S2_at_S1");
        const double c1 = lj.get() + std::sqrt(double(r2)) * lx.get();
        const double c2 = lj.get() + std::sqrt(double(r1)) * ly.get();
        const double c3 = pinv_norm * std::sqrt(double(r1) * double(r2)) * lx.get() * ly.get();
        // 0 * inf stays 0 so that S = X, S = Y gives rhs 0 as written
        auto mul = [](double c, double d) { return d == 0.0 ? 0.0 : c * d; };
        r.rhs = mul(c1, delta1) + mul(c2, delta2) + mul(c3, delta1 * delta2);
        r.terms.insert({{"delta_X_S1", delta1},
                        {"delta_Y_S2", delta2},
                        {"C1", c1},
                        {"C2", c2},
                        {"C3", c3},
                        {"pinv_norm", pinv_norm},
                        {"r1", double(r1)},
                        {"r2", double(r2)}});
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<BoundReport> check_one_sided(const KernelMatrix& k, const SubsetSelection& s, double id_bound,
                                         Index guard)
{
    guard_sizes(k, guard);
    if (s.indices.empty())
        throw std::invalid_argument("check_one_sided: empty subset");
    s.validate(k.col_points());
    const auto& is = s.indices;
    const auto ns = static_cast<Index>(is.size());
    if (ns > k.rows())
        throw std::invalid_argument("check_one_sided: |S| exceeds the number of rows");

    const auto f = one_sided_from_sample(k, SampleSide::SampleY, s, ns, id_bound);
    const Eigen::MatrixXd kd = k.dense();
    const double lhs = max_norm(kd - f.dense());
    const Index m = kd.rows();
    const Index n = kd.cols();
    const auto& skel = f.skeleton;
    const auto r = static_cast<Index>(skel.size());
    const Eigen::MatrixXd kxs = k.cols_block(is);
    const Eigen::MatrixXd cd = column_differences(kd, is);

    auto t_term = [&](const std::vector<Index>& rows) {
        double t = 0.0;
        for (Index y = 0; y < n; ++y)
            for (Index x : rows) {
                double best = std::numeric_limits<double>::infinity();
                for (Index b = 0; b < ns; ++b)
                    best = std::min(best, std::abs(kd(x, y) - kxs(x, b)) + cd(y, b));
                t = std::max(t, best);
            }
        return t;
    };
    std::vector<Index> all(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i)
        all[static_cast<std::size_t>(i)] = i;

    std::vector<BoundReport> out;
    {
        const double tx = t_term(all);
        const double ti = t_term(skel);
        BoundReport rep;
        rep.kind = BoundKind::Thm33OneSided;
        rep.lhs = lhs;
        rep.rhs = tx + id_bound * double(r) * ti;
        rep.terms = {{"T_X", tx}, {"T_I", ti}, {"r", double(r)}, {"id_bound", id_bound}};
        out.push_back(std::move(rep));
    }
    {
        const PointSet& xs = k.row_points();
        const PointSet& ys = k.col_points();
        const Eigen::MatrixXd dxx = pairwise_distances(xs, xs);
        const Eigen::MatrixXd dy = pairwise_distances(ys, ys.subset(is));
        const double delta = dy.rowwise().minCoeff().maxCoeff();

        auto joint = [&](const std::vector<Index>& rows) {
            LipschitzValue l;
            for (Index b = 0; b < ns; ++b)
                for (Index y = 0; y < n; ++y) {
                    const double dyb = dy(y, b);
                    for (Index u : rows) {
                        const double kuv = kxs(u, b);
                        for (Index x : rows)
                            l.add(std::abs(kd(x, y) - kuv), std::hypot(dxx(x, u), dyb));
                    }
                }
            return l;
        };
        const LipschitzValue l1 = joint(all);
        const LipschitzValue l3 = joint(skel);
        LipschitzValue l2;
        for (Index b = 0; b < ns; ++b)
            for (Index y = 0; y < n; ++y)
                for (Index x = 0; x < m; ++x)
                    l2.add(std::abs(kd(x, y) - kxs(x, b)), dy(y, b));

        BoundReport rep;
        rep.kind = BoundKind::Thm34OneSidedGeometric;
        rep.lhs = lhs;
        flag_infinite(rep, l1, "L_XxY_XxS");
        flag_infinite(rep, l2, "L_Y_S_at_X");
        flag_infinite(rep, l3, "L_IxY_IxS");
        const double sr = id_bound * double(r);
        rep.rhs = delta == 0.0 ? 0.0
                               : l1.get() * delta + (1.0 + sr) * std::sqrt(double(m)) * l2.get() * delta +
                                     sr * l3.get() * delta;
        rep.terms.insert({{"delta_Y_S", delta}, {"r", double(r)}, {"m", double(m)}, {"id_bound", id_bound}});
        out.push_back(std::move(rep));
    }
    return out;
}

} // namespace geolr
