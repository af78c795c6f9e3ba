#ifndef GEOLR_POINTSET_HPP
#define GEOLR_POINTSET_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace geolr {

using Index = Eigen::Index;

/// Finite ordered set of points in R^d, one point per row.
class PointSet
{
public:
    using Storage = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    using ConstPoint = decltype(std::declval<const Storage&>().row(0));

    PointSet() = default;
    explicit PointSet(Storage coords, std::string label = {});

    Index size() const { return coords_.rows(); }
    Index dim() const { return coords_.cols(); }
    bool empty() const { return coords_.rows() == 0; }

    ConstPoint point(Index i) const { return coords_.row(i); }
    const Storage& coords() const { return coords_; }
    const std::string& label() const { return label_; }

    /// Points at the given indices, in the given order.
    PointSet subset(std::span<const Index> indices) const;

    Eigen::RowVectorXd centroid() const;

private:
    Storage coords_;
    std::string label_;
};

enum class SelectionMethod { Fps, Uniform, Mixed, AnchorGrid, Explicit };

const char* to_string(SelectionMethod m);

/// Indices into a source point set together with how they were obtained.
struct SubsetSelection
{
    std::vector<Index> indices;
    SelectionMethod method = SelectionMethod::Explicit;
    double fps_fraction = 0.0;
    std::uint64_t seed = 0;

    Index size() const { return static_cast<Index>(indices.size()); }

    /// Throws if any index is out of range for `source` or repeated.
    void validate(const PointSet& source) const;

    static SubsetSelection explicit_indices(std::vector<Index> idx)
    {
        return SubsetSelection{std::move(idx), SelectionMethod::Explicit, 0.0, 0};
    }
    static SubsetSelection all(Index n);
};

struct StandardizationRecord
{
    Eigen::RowVectorXd mean;
    Eigen::RowVectorXd scale;
    /// Set when some dimension had zero variance; its scale is then 1.
    bool constant_dimension = false;

    PointSet apply(const PointSet& raw) const;
    PointSet invert(const PointSet& standardized) const;
};

template <typename DerivedA, typename DerivedB>
double squared_distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("distance: dimension mismatch");
    double s = 0.0;
    for (Index k = 0; k < a.size(); ++k) {
        const double t = a.coeff(k) - b.coeff(k);
        s += t * t;
    }
    return s;
}

template <typename DerivedA, typename DerivedB>
double distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b)
{
    return std::sqrt(squared_distance(a, b));
}

/// max over z in Z of the distance from z to its nearest point of S.
double delta(const PointSet& z, const PointSet& s);
/// Same, with S given as indices into Z.
double delta(const PointSet& z, std::span<const Index> s);
inline double delta(const PointSet& z, const SubsetSelection& s) { return delta(z, s.indices); }

/// Per-dimension zero mean and unit (population) variance.
std::pair<PointSet, StandardizationRecord> standardize(const PointSet& raw);

/// k distinct indices drawn uniformly without replacement, in draw order.
std::vector<Index> sample_indices(Index n, Index k, std::uint64_t seed);

PointSet subsample_without_replacement(const PointSet& ps, Index k, std::uint64_t seed);

/// Numeric CSV, one point per row. A leading non-numeric row is treated as a header.
PointSet read_csv(const std::string& path);
PointSet parse_csv(const std::string& text, const std::string& label = {});

enum class SyntheticKind { ShiftedManifold, UniformBoxes, TwoClusters2D, GaussianMixture };

SyntheticKind parse_synthetic_kind(const std::string& name);
const char* to_string(SyntheticKind k);

struct SyntheticSpec
{
    SyntheticKind kind = SyntheticKind::UniformBoxes;
    Index n = 1000;       ///< points per set (Y count for mixtures)
    Index m = 0;          ///< X count for mixtures; 0 means n
    Index dim = 3;
    double shift = 2.7;   ///< vertical offset of Y for the shifted manifold
    Index clusters = 8;
    double spread = 0.3;  ///< mixture component scale relative to center spacing
    std::uint64_t seed = 0;
};

/// Generates the pair (X, Y) described by `spec`.
///
/// ShiftedManifold: X is 5/7 of the points uniformly on the unit upper
/// hemisphere z >= 0 plus four axis-aligned cubes of side 0.2 holding the rest
/// (centres (+-0.79, +-0.79, -0.854), just below the rim); Y = X + (0,0,shift).
/// The inner bottom cube corners set the X-Y minimum distance: about 1, 0.43
/// and 0.12 for shifts 2.7, 2 and 0.5, the last from shell against shell. X spans
/// z in [-0.954, 1], so the bounding boxes touch at shift 2.
///
/// UniformBoxes: X ~ U[0,1]^d, Y ~ U[2,3]^d.
///
/// TwoClusters2D: 80% of the points in a tight Gaussian blob at the origin,
/// 20% uniform over [1,3]x[0,2]; X and Y are independent draws.
///
/// GaussianMixture: `clusters` centres drawn from N(0, I_d) scaled by 4, each
/// with an anisotropic component living mostly in a 3-dimensional random
/// subspace; cluster sizes are geometrically unbalanced. X and Y are
/// independent draws of sizes m and n.
std::pair<PointSet, PointSet> generate_synthetic(const SyntheticSpec& spec);

} // namespace geolr

#endif // GEOLR_POINTSET_HPP
