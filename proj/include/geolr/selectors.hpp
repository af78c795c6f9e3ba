#ifndef GEOLR_SELECTORS_HPP
#define GEOLR_SELECTORS_HPP

#include <cstdint>
#include <string>

#include "geolr/pointset.hpp"

namespace geolr {

enum class FpsStart { FarthestFromCentroid, Index0, SeededRandom };

struct SelectorConfig
{
    SelectionMethod method = SelectionMethod::Fps;
    Index sample_count = 1;
    double fps_fraction = 0.2; ///< Mixed only
    std::uint64_t seed = 0;
    FpsStart fps_start = FpsStart::FarthestFromCentroid;
};

SelectionMethod parse_selection_method(const std::string& name);
FpsStart parse_fps_start(const std::string& name);
const char* to_string(FpsStart s);

/// Greedy max-min (farthest point) sampling.
///
/// Keeps the distance from every point to its nearest selected point, so the
/// whole run costs O(d r n). Ties go to the lowest index.
SubsetSelection fps_select(const PointSet& ps, Index r, const SelectorConfig& config = {});

/// Continues farthest point sampling from an existing selection until it holds
/// `r` indices. Used to top up other selectors.
SubsetSelection fps_extend(const PointSet& ps, std::vector<Index> chosen, Index r);

SubsetSelection uniform_select(const PointSet& ps, Index r, std::uint64_t seed);

/// ceil(fps_fraction * r) points by FPS, the rest uniformly from the unchosen points.
SubsetSelection mixed_select(const PointSet& ps, Index r, double fps_fraction, std::uint64_t seed,
                             FpsStart start = FpsStart::FarthestFromCentroid);

/// Stand-in for anchor-net landmark selection.
///
/// The data are mapped affinely into the unit box and `r` anchors are laid
/// down from the additive recurrence (Kronecker) sequence
/// a_i = frac(shift + i * alpha) with alpha_k = phi_d^{-k}, where phi_d is the
/// unique positive root of x^{d+1} = x + 1 and shift is drawn from `seed`
/// (anchor generator version 1). Every anchor picks its nearest data point;
/// repeats are dropped and any shortfall is filled by farthest point sampling
/// over the remainder.
SubsetSelection anchor_grid_select(const PointSet& ps, Index r, std::uint64_t seed);

/// Dispatch on `config.method` with `config.sample_count` samples.
SubsetSelection select(const PointSet& ps, const SelectorConfig& config);

/// Unit-box anchors used by anchor_grid_select, exposed for testing.
Eigen::MatrixXd kronecker_anchors(Index count, Index dim, std::uint64_t seed);

} // namespace geolr

#endif // GEOLR_SELECTORS_HPP
