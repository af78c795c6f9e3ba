#include "geolr/selectors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "geolr/rng.hpp"

namespace geolr {

SelectionMethod parse_selection_method(const std::string& name)
{
    if (name == "fps") return SelectionMethod::Fps;
    if (name == "uniform" || name == "unif") return SelectionMethod::Uniform;
    if (name == "mixed") return SelectionMethod::Mixed;
    if (name == "anchor-grid" || name == "anc") return SelectionMethod::AnchorGrid;
    throw std::invalid_argument("unknown selector '" + name + "'");
}

FpsStart parse_fps_start(const std::string& name)
{
    if (name == "farthest-from-centroid") return FpsStart::FarthestFromCentroid;
    if (name == "index0") return FpsStart::Index0;
    if (name == "seeded-random") return FpsStart::SeededRandom;
    throw std::invalid_argument("unknown fps start '" + name + "'");
}

const char* to_string(FpsStart s)
{
    switch (s) {
    case FpsStart::FarthestFromCentroid: return "farthest-from-centroid";
    case FpsStart::Index0: return "index0";
    case FpsStart::SeededRandom: return "seeded-random";
    }
    return "?";
}

namespace {

void check_count(const PointSet& ps, Index r, const char* who)
{
    if (r < 1 || r > ps.size())
        throw std::invalid_argument(std::string(who) + ": sample count must lie in [1, " + std::to_string(ps.size()) +
                                    "], got " + std::to_string(r));
}

Index start_index(const PointSet& ps, FpsStart start, std::uint64_t seed)
{
    switch (start) {
    case FpsStart::Index0:
        return 0;
    case FpsStart::SeededRandom: {
        Rng rng(seed);
        return static_cast<Index>(rng.below(static_cast<std::uint64_t>(ps.size())));
    }
    case FpsStart::FarthestFromCentroid: {
        const Eigen::RowVectorXd c = ps.centroid();
        Index best = 0;
        double best_d = -1.0;
        for (Index i = 0; i < ps.size(); ++i) {
            const double d = squared_distance(ps.point(i), c);
            if (d > best_d) {
                best_d = d;
                best = i;
            }
        }
        return best;
    }
    }
    return 0;
}

// Greedy farthest-point continuation. `mind` holds squared distances to the
// current selection; selected points are flagged and never re-chosen.
void fps_grow(const PointSet& ps, std::vector<Index>& chosen, std::vector<double>& mind, std::vector<char>& taken,
              Index r)
{
    const Index n = ps.size();
    auto absorb = [&](Index s) {
        taken[static_cast<std::size_t>(s)] = 1;
        const auto p = ps.point(s);
        for (Index i = 0; i < n; ++i) {
            const double d = squared_distance(ps.point(i), p);
            if (d < mind[static_cast<std::size_t>(i)])
                mind[static_cast<std::size_t>(i)] = d;
        }
    };
    for (Index s : chosen)
        absorb(s);
    while (static_cast<Index>(chosen.size()) < r) {
        Index best = -1;
        double best_d = -1.0;
        for (Index i = 0; i < n; ++i) {
            if (taken[static_cast<std::size_t>(i)])
                continue;
            if (mind[static_cast<std::size_t>(i)] > best_d) {
                best_d = mind[static_cast<std::size_t>(i)];
                best = i;
            }
        }
        chosen.push_back(best);
        absorb(best);
    }
}

} // namespace

SubsetSelection fps_select(const PointSet& ps, Index r, const SelectorConfig& config)
{
    check_count(ps, r, "fps_select");
    SubsetSelection out;
    out.method = SelectionMethod::Fps;
    out.seed = config.seed;
    out.fps_fraction = 1.0;
    std::vector<double> mind(static_cast<std::size_t>(ps.size()), std::numeric_limits<double>::infinity());
    std::vector<char> taken(static_cast<std::size_t>(ps.size()), 0);
    out.indices.push_back(start_index(ps, config.fps_start, config.seed));
    fps_grow(ps, out.indices, mind, taken, r);
    return out;
}

SubsetSelection fps_extend(const PointSet& ps, std::vector<Index> chosen, Index r)
{
    check_count(ps, r, "fps_extend");
    if (chosen.empty())
        chosen.push_back(start_index(ps, FpsStart::FarthestFromCentroid, 0));
    std::vector<double> mind(static_cast<std::size_t>(ps.size()), std::numeric_limits<double>::infinity());
    std::vector<char> taken(static_cast<std::size_t>(ps.size()), 0);
    fps_grow(ps, chosen, mind, taken, r);
    SubsetSelection out;
    out.indices = std::move(chosen);
    out.method = SelectionMethod::Fps;
    return out;
}

SubsetSelection uniform_select(const PointSet& ps, Index r, std::uint64_t seed)
{
    check_count(ps, r, "uniform_select");
    SubsetSelection out;
    out.indices = sample_indices(ps.size(), r, seed);
    out.method = SelectionMethod::Uniform;
    out.seed = seed;
    return out;
}

SubsetSelection mixed_select(const PointSet& ps, Index r, double fps_fraction, std::uint64_t seed, FpsStart start)
{
    check_count(ps, r, "mixed_select");
    if (!(fps_fraction >= 0.0 && fps_fraction <= 1.0))
        throw std::invalid_argument("mixed_select: fps_fraction must lie in [0,1]");
    // The small offset keeps e.g. 0.05 * 20 from rounding up to 2.
    const auto k_fps = std::min<Index>(r, static_cast<Index>(std::ceil(fps_fraction * static_cast<double>(r) - 1e-9)));

    SelectorConfig cfg;
    cfg.seed = seed;
    cfg.fps_start = start;
    SubsetSelection out;
    if (k_fps > 0)
        out = fps_select(ps, k_fps, cfg);

    std::vector<char> taken(static_cast<std::size_t>(ps.size()), 0);
    for (Index i : out.indices)
        taken[static_cast<std::size_t>(i)] = 1;
    std::vector<Index> pool;
    pool.reserve(static_cast<std::size_t>(ps.size() - k_fps));
    for (Index i = 0; i < ps.size(); ++i)
        if (!taken[static_cast<std::size_t>(i)])
            pool.push_back(i);
    for (Index j : sample_indices(static_cast<Index>(pool.size()), r - k_fps, seed))
        out.indices.push_back(pool[static_cast<std::size_t>(j)]);

    out.method = SelectionMethod::Mixed;
    out.fps_fraction = fps_fraction;
    out.seed = seed;
    return out;
}

Eigen::MatrixXd kronecker_anchors(Index count, Index dim, std::uint64_t seed)
{
    double phi = 2.0;
    for (int it = 0; it < 128; ++it)
        phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(dim + 1));
    Eigen::VectorXd alpha(dim);
    for (Index k = 0; k < dim; ++k)
        alpha(k) = std::fmod(std::pow(1.0 / phi, static_cast<double>(k + 1)), 1.0);
    Rng rng(seed);
    Eigen::VectorXd shift(dim);
    for (Index k = 0; k < dim; ++k)
        shift(k) = rng.uniform();
    Eigen::MatrixXd a(count, dim);
    for (Index i = 0; i < count; ++i)
        for (Index k = 0; k < dim; ++k) {
            const double v = shift(k) + static_cast<double>(i + 1) * alpha(k);
            a(i, k) = v - std::floor(v);
        }
    return a;
}

SubsetSelection anchor_grid_select(const PointSet& ps, Index r, std::uint64_t seed)
{
    check_count(ps, r, "anchor_grid_select");
    SubsetSelection out;
    out.method = SelectionMethod::AnchorGrid;
    out.seed = seed;

    const Index n = ps.size();
    const Index d = ps.dim();
    const Eigen::RowVectorXd lo = ps.coords().colwise().minCoeff();
    const Eigen::RowVectorXd hi = ps.coords().colwise().maxCoeff();
    Eigen::RowVectorXd span = hi - lo;
    for (Index k = 0; k < d; ++k)
        if (span(k) <= 0.0)
            span(k) = 1.0;
    // Anchors mapped back into data coordinates instead of mapping every point.
    Eigen::MatrixXd anchors = kronecker_anchors(r, d, seed);
    for (Index i = 0; i < r; ++i)
        anchors.row(i) = lo.array() + anchors.row(i).array() * span.array();

    std::vector<char> taken(static_cast<std::size_t>(n), 0);
    std::vector<Index> chosen;
    for (Index a = 0; a < r; ++a) {
        Index best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < n; ++i) {
            // Distances measured in the unit box.
            double s = 0.0;
            for (Index k = 0; k < d; ++k) {
                const double t = (ps.coords()(i, k) - anchors(a, k)) / span(k);
                s += t * t;
            }
            if (s < best_d) {
                best_d = s;
                best = i;
            }
        }
        if (!taken[static_cast<std::size_t>(best)]) {
            taken[static_cast<std::size_t>(best)] = 1;
            chosen.push_back(best);
        }
    }
    SubsetSelection filled = fps_extend(ps, std::move(chosen), r);
    out.indices = std::move(filled.indices);
    return out;
}

SubsetSelection select(const PointSet& ps, const SelectorConfig& config)
{
    switch (config.method) {
    case SelectionMethod::Fps: return fps_select(ps, config.sample_count, config);
    case SelectionMethod::Uniform: return uniform_select(ps, config.sample_count, config.seed);
    case SelectionMethod::Mixed:
        return mixed_select(ps, config.sample_count, config.fps_fraction, config.seed, config.fps_start);
    case SelectionMethod::AnchorGrid: return anchor_grid_select(ps, config.sample_count, config.seed);
    case SelectionMethod::Explicit: break;
    }
    throw std::invalid_argument("select: explicit selections carry their own indices");
}

} // namespace geolr
