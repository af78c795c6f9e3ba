#ifndef GEOLR_KERNELS_HPP
#define GEOLR_KERNELS_HPP

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "geolr/pointset.hpp"

namespace geolr {

enum class KernelType {
    InverseDistance,    ///< 1/|x-y|
    Distance,           ///< |x-y|
    LogDistance,        ///< log|x-y|
    Gaussian,           ///< exp(-|x-y|^2 / sigma^2)
    RationalQuadratic,  ///< (1 + |x-y|^2 / R^2)^-1
    BumpExp,            ///< exp(-1 / (1 - c|x-y|^2))
    AnisotropicInverse, ///< x_1 / |x-y|
    Poly123,            ///< x.y + (x.y)^2 + (x.y)^3
    Product,            ///< x.y
};

/// Registry entry: one row per kernel, shared by parsing, evaluation and reporting.
struct KernelInfo
{
    KernelType type;
    std::string_view name;
    std::string_view alias; ///< "table1:kN" where applicable
    std::string_view param; ///< parameter name, empty for none
    bool symmetric;
    bool singular_at_coincidence;
};

std::span<const KernelInfo> kernel_registry();
const KernelInfo& kernel_info(KernelType t);

class SingularEntryError : public std::domain_error
{
public:
    SingularEntryError(Index row, Index col, const std::string& what)
        : std::domain_error(what), row_(row), col_(col)
    {
    }
    Index row() const { return row_; }
    Index col() const { return col_; }

private:
    Index row_;
    Index col_;
};

struct KernelSpec
{
    KernelType type = KernelType::Gaussian;
    double param = 1.0; ///< sigma, R or c depending on type

    static KernelSpec gaussian(double sigma) { return {KernelType::Gaussian, sigma}; }
    static KernelSpec rational_quadratic(double r) { return {KernelType::RationalQuadratic, r}; }
    static KernelSpec bump_exp(double c) { return {KernelType::BumpExp, c}; }
    static KernelSpec of(KernelType t) { return {t, 0.0}; }

    const KernelInfo& info() const { return kernel_info(type); }
    std::string name() const;
    bool symmetric() const { return info().symmetric; }

    /// Throws std::invalid_argument on a bad parameter.
    void validate() const;

    /// Kernel value; returns NaN where the kernel is undefined.
    template <typename DerivedA, typename DerivedB>
    double operator()(const Eigen::MatrixBase<DerivedA>& x, const Eigen::MatrixBase<DerivedB>& y) const
    {
        switch (type) {
        case KernelType::Poly123:
        case KernelType::Product: {
            double t = 0.0;
            for (Index k = 0; k < x.size(); ++k)
                t += x.coeff(k) * y.coeff(k);
            return type == KernelType::Product ? t : t + t * t + t * t * t;
        }
        case KernelType::AnisotropicInverse:
            return x.coeff(0) / std::sqrt(squared_distance(x, y));
        default:
            return radial(squared_distance(x, y));
        }
    }

    /// Value of a radial kernel from the squared distance.
    double radial(double r2) const;
};

/// Parses "gaussian", "inverse-distance", "table1:k4", ... `param` fills the
/// kernel parameter when the kernel takes one.
KernelSpec parse_kernel(const std::string& name, double param = 0.0);

/// Lazily evaluated K_{XY}. Holds references; the point sets must outlive it.
class KernelMatrix
{
public:
    KernelMatrix(KernelSpec kernel, const PointSet& x, const PointSet& y);

    Index rows() const { return transposed_ ? y_->size() : x_->size(); }
    Index cols() const { return transposed_ ? x_->size() : y_->size(); }

    const KernelSpec& kernel() const { return kernel_; }
    const PointSet& row_points() const { return transposed_ ? *y_ : *x_; }
    const PointSet& col_points() const { return transposed_ ? *x_ : *y_; }

    /// True when rows and columns share the same point set and the matrix is symmetric.
    bool symmetric() const { return x_ == y_ && kernel_.symmetric(); }

    /// Same entries transposed, without copying points.
    KernelMatrix transposed() const;

    double entry(Index i, Index j) const;
    Eigen::MatrixXd block(std::span<const Index> rows, std::span<const Index> cols) const;
    Eigen::MatrixXd rows_block(std::span<const Index> rows) const;
    Eigen::MatrixXd cols_block(std::span<const Index> cols) const;
    Eigen::VectorXd row(Index i) const;
    Eigen::VectorXd col(Index j) const;

    /// Dense K; throws std::length_error above `max_entries`.
    Eigen::MatrixXd dense(double max_entries = 1e8) const;

private:
    KernelSpec kernel_;
    const PointSet* x_;
    const PointSet* y_;
    bool transposed_ = false;
};

/// max over x of |x|, the radius of a (standardized) set about the origin.
double radius(const PointSet& x);

/// max |x - y|^2 over X x Y. Exact when |X||Y| <= exact_limit; otherwise the max
/// over `sample_pairs` seeded random pairs, inflated by 1.02.
double max_pair_squared_distance(const PointSet& x, const PointSet& y, std::uint64_t seed = 0,
                                 double exact_limit = 1e8, Index sample_pairs = 1000000);

/// Data-dependent kernel parameters: sigma = sigma_fraction * radius(X) for the
/// Gaussian, R = radius(X) for the rational quadratic and
/// c = 0.8 / max |x-y|^2 for the bump kernel.
KernelSpec derive_params(KernelType type, const PointSet& x, const PointSet& y, double sigma_fraction = 1.0,
                         std::uint64_t seed = 0);

} // namespace geolr

#endif // GEOLR_KERNELS_HPP
