#include "geolr/indicators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace geolr {

IndicatorReport compute_indicators(const KernelMatrix& k, const SubsetSelection& s1, const SubsetSelection& s2,
                                   IndicatorSet which, double ind1_guard)
{
    if (s1.indices.empty() || s2.indices.empty())
        throw std::invalid_argument("compute_indicators: subsets must be nonempty");
    s1.validate(k.row_points());
    s2.validate(k.col_points());
    const Index m = k.rows();
    const Index n = k.cols();
    const auto r1 = static_cast<Index>(s1.indices.size());
    const auto r2 = static_cast<Index>(s2.indices.size());

    IndicatorReport rep;
    rep.s1 = s1.indices;
    rep.s2 = s2.indices;
    const bool need_w = which[0] || which[4];
    Eigen::MatrixXd w;
    if (need_w)
        w = k.block(s1.indices, s2.indices);

    if (which[0]) {
        if (static_cast<double>(m) * static_cast<double>(n) > ind1_guard)
            throw std::length_error("indicator 1 needs all m*n kernel entries; size guard exceeded");
        // nearest value in the sorted core entries
        std::vector<double> vals(w.data(), w.data() + w.size());
        std::sort(vals.begin(), vals.end());
        double best = 0.0;
        for (Index y = 0; y < n; ++y) {
            const Eigen::VectorXd col = k.col(y);
            for (Index x = 0; x < m; ++x) {
                const double v = col(x);
                auto it = std::lower_bound(vals.begin(), vals.end(), v);
                double d = std::numeric_limits<double>::infinity();
                if (it != vals.end())
                    d = *it - v;
                if (it != vals.begin())
                    d = std::min(d, v - *(it - 1));
                best = std::max(best, d);
            }
        }
        rep.values[0] = best;
        rep.costs[0] = static_cast<double>(m) * static_cast<double>(n) * std::log2(double(r1 * r2) + 1.0);
    }
    if (which[1]) {
        const Eigen::MatrixXd c = k.cols_block(s2.indices);
        double best = 0.0;
        for (Index x = 0; x < m; ++x) {
            double near = std::numeric_limits<double>::infinity();
            for (Index u : s1.indices)
                near = std::min(near, (c.row(x) - c.row(u)).squaredNorm());
            best = std::max(best, near);
        }
        rep.values[1] = std::sqrt(best);
        rep.costs[1] = static_cast<double>(m) * double(r1) * double(r2);
    }
    if (which[2]) {
        rep.values[2] = delta(k.row_points(), s1);
        rep.costs[2] = static_cast<double>(m) * double(r1);
    }
    if (which[3]) {
        rep.values[3] = delta(k.col_points(), s2);
        rep.costs[3] = static_cast<double>(n) * double(r2);
    }
    if (which[4]) {
        const auto pinv = pseudo_inverse(w);
        rep.values[4] = pinv.rank > 0 ? 1.0 / pinv.sigma_min : 0.0;
        rep.costs[4] = double(r1) * double(r2) * double(std::min(r1, r2));
    }
    return rep;
}

Prediction predict(std::optional<double> ratio)
{
    if (!ratio || !std::isfinite(*ratio))
        return Prediction::Undefined;
    if (*ratio > 1.0)
        return Prediction::ABetter;
    if (*ratio < 1.0)
        return Prediction::BBetter;
    return Prediction::Tie;
}

char to_char(Prediction p)
{
    switch (p) {
    case Prediction::ABetter: return 'A';
    case Prediction::BBetter: return 'B';
    case Prediction::Tie: return '=';
    case Prediction::Undefined: return '?';
    }
    return '?';
}

namespace {

std::optional<double> ratio(std::optional<double> b, std::optional<double> a)
{
    if (!a || !b || *a == 0.0)
        return std::nullopt;
    return *b / *a;
}

double two_sided_max_error(const KernelMatrix& k, const Eigen::MatrixXd& kd, const SubsetChoice& c)
{
    const auto f = two_sided(k, c.s1, c.s2);
    return max_norm(kd - f.dense());
}

} // namespace

RatioRow compare_choice_pair(const KernelMatrix& k, const SubsetChoice& a, const SubsetChoice& b,
                             IndicatorSet which)
{
    const auto ia = compute_indicators(k, a.s1, a.s2, which);
    const auto ib = compute_indicators(k, b.s1, b.s2, which);
    const Eigen::MatrixXd kd = k.dense();
    RatioRow row;
    row.rank = std::max(a.s1.size(), a.s2.size());
    for (std::size_t i = 0; i < 5; ++i) {
        row.ratios[i] = ratio(ib.values[i], ia.values[i]);
        row.predictions[i] = predict(row.ratios[i]);
    }
    row.error_a = two_sided_max_error(k, kd, a);
    row.error_b = two_sided_max_error(k, kd, b);
    row.error_ratio = ratio(row.error_b, row.error_a);
    row.seed_a = a.s1.seed;
    return row;
}

std::vector<RatioRow> compare_choices(const KernelMatrix& k, const std::function<SubsetChoice(Index)>& choice_a,
                                      const std::function<SubsetChoice(Index)>& choice_b,
                                      const std::vector<Index>& ranks, IndicatorSet which)
{
    std::vector<RatioRow> rows;
    rows.reserve(ranks.size());
    for (Index r : ranks) {
        RatioRow row = compare_choice_pair(k, choice_a(r), choice_b(r), which);
        row.rank = r;
        rows.push_back(row);
    }
    return rows;
}

std::vector<RatioRow> random_vs_fps(const KernelMatrix& k, const RatioStudyOptions& options)
{
    if (options.shared_subset && &k.row_points() != &k.col_points())
        throw std::invalid_argument("random_vs_fps: a shared subset needs X = Y");
    if (options.ranks.empty())
        return {};
    const Index rmax = *std::max_element(options.ranks.begin(), options.ranks.end());
    const SubsetSelection fx = fps_select(k.row_points(), rmax);
    const SubsetSelection fy = options.shared_subset ? fx : fps_select(k.col_points(), rmax);
    auto prefix = [](const SubsetSelection& s, Index r) {
        SubsetSelection out = s;
        out.indices.resize(static_cast<std::size_t>(r));
        return out;
    };
    auto choice_a = [&](Index r) {
        const std::uint64_t seed = options.seed + static_cast<std::uint64_t>(r);
        SubsetChoice c;
        c.s1 = uniform_select(k.row_points(), r, seed);
        c.s2 = options.shared_subset ? c.s1 : uniform_select(k.col_points(), r, seed ^ 0x9e3779b97f4a7c15ULL);
        return c;
    };
    auto choice_b = [&](Index r) { return SubsetChoice{prefix(fx, r), prefix(fy, r)}; };
    return compare_choices(k, choice_a, choice_b, options.ranks, options.which);
}

void write_ratio_csv(std::ostream& os, const std::vector<RatioRow>& rows)
{
    os << "rank,ratio_ind1,ratio_ind2,ratio_ind3,ratio_ind4,ratio_ind5,ratio_error,predictions\n";
    os.precision(17);
    auto field = [&](std::optional<double> v) {
        if (v)
            os << *v;
    };
    for (const auto& r : rows) {
        os << r.rank;
        for (const auto& v : r.ratios) {
            os << ',';
            field(v);
        }
        os << ',';
        field(r.error_ratio);
        os << ',';
        for (auto p : r.predictions)
            os << to_char(p);
        os << '\n';
    }
}

} // namespace geolr
