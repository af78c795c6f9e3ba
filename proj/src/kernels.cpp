#include "geolr/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "geolr/rng.hpp"

namespace geolr {

namespace {

constexpr std::array<KernelInfo, 9> registry{{
    {KernelType::InverseDistance, "inverse-distance", "", "", true, true},
    {KernelType::Distance, "distance", "table1:k1", "", true, false},
    {KernelType::LogDistance, "log-distance", "table1:k2", "", true, true},
    {KernelType::Gaussian, "gaussian", "", "sigma", true, false},
    {KernelType::RationalQuadratic, "rational-quadratic", "table1:k3", "R", true, false},
    {KernelType::BumpExp, "bump-exp", "table1:k4", "c", true, false},
    {KernelType::AnisotropicInverse, "anisotropic-inverse", "table1:k5", "", false, true},
    {KernelType::Poly123, "poly123", "table1:k6", "", true, false},
    {KernelType::Product, "product", "", "", true, false},
}};

} // namespace

std::span<const KernelInfo> kernel_registry() { return registry; }

const KernelInfo& kernel_info(KernelType t)
{
    for (const auto& k : registry)
        if (k.type == t)
            return k;
    throw std::invalid_argument("kernel_info: unregistered kernel");
}

std::string KernelSpec::name() const
{
    std::ostringstream os;
    os << info().name;
    if (!info().param.empty())
        os << '(' << info().param << '=' << param << ')';
    return os.str();
}

void KernelSpec::validate() const
{
    const bool needs_positive =
        type == KernelType::Gaussian || type == KernelType::RationalQuadratic || type == KernelType::BumpExp;
    if (needs_positive && !(param > 0.0 && std::isfinite(param)))
        throw std::invalid_argument("kernel " + std::string(info().name) + ": parameter must be positive");
}

double KernelSpec::radial(double r2) const
{
    switch (type) {
    case KernelType::InverseDistance: return 1.0 / std::sqrt(r2);
    case KernelType::Distance: return std::sqrt(r2);
    case KernelType::LogDistance: return 0.5 * std::log(r2);
    case KernelType::Gaussian: return std::exp(-r2 / (param * param));
    case KernelType::RationalQuadratic: return 1.0 / (1.0 + r2 / (param * param));
    case KernelType::BumpExp: {
        const double t = 1.0 - param * r2;
        return t > 0.0 ? std::exp(-1.0 / t) : std::numeric_limits<double>::quiet_NaN();
    }
    default: return std::numeric_limits<double>::quiet_NaN();
    }
}

KernelSpec parse_kernel(const std::string& name, double param)
{
    for (const auto& k : registry) {
        if (name == k.name || (!k.alias.empty() && name == k.alias)) {
            KernelSpec spec{k.type, param};
            if (!k.param.empty())
                spec.validate();
            return spec;
        }
    }
    if (name == "log")
        return KernelSpec::of(KernelType::LogDistance);
    throw std::invalid_argument("unknown kernel '" + name + "'");
}

KernelMatrix::KernelMatrix(KernelSpec kernel, const PointSet& x, const PointSet& y)
    : kernel_(kernel), x_(&x), y_(&y)
{
    kernel_.validate();
    if (x.dim() != y.dim())
        throw std::invalid_argument("KernelMatrix: X and Y differ in dimension");
}

KernelMatrix KernelMatrix::transposed() const
{
    KernelMatrix t = *this;
    t.transposed_ = !transposed_;
    return t;
}

double KernelMatrix::entry(Index i, Index j) const
{
    if (i < 0 || i >= rows() || j < 0 || j >= cols())
        throw std::out_of_range("KernelMatrix::entry: index out of range");
    const double v = transposed_ ? kernel_(x_->point(j), y_->point(i)) : kernel_(x_->point(i), y_->point(j));
    if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "kernel " << kernel_.info().name << " undefined at entry (" << i << ", " << j << ")";
        throw SingularEntryError(i, j, os.str());
    }
    return v;
}

Eigen::MatrixXd KernelMatrix::block(std::span<const Index> rows, std::span<const Index> cols) const
{
    Eigen::MatrixXd out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (Index b = 0; b < out.cols(); ++b)
        for (Index a = 0; a < out.rows(); ++a)
            out(a, b) = entry(rows[static_cast<std::size_t>(a)], cols[static_cast<std::size_t>(b)]);
    return out;
}

namespace {

std::vector<Index> iota_vec(Index n)
{
    std::vector<Index> v(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i)
        v[static_cast<std::size_t>(i)] = i;
    return v;
}

} // namespace

Eigen::MatrixXd KernelMatrix::rows_block(std::span<const Index> rows) const
{
    const auto all = iota_vec(cols());
    return block(rows, all);
}

Eigen::MatrixXd KernelMatrix::cols_block(std::span<const Index> cols) const
{
    const auto all = iota_vec(rows());
    return block(all, cols);
}

Eigen::VectorXd KernelMatrix::row(Index i) const
{
    const Index r[1] = {i};
    return rows_block(r).transpose();
}

Eigen::VectorXd KernelMatrix::col(Index j) const
{
    const Index c[1] = {j};
    return cols_block(c);
}

Eigen::MatrixXd KernelMatrix::dense(double max_entries) const
{
    if (static_cast<double>(rows()) * static_cast<double>(cols()) > max_entries)
        throw std::length_error("KernelMatrix::dense: matrix exceeds the dense evaluation guard");
    const auto r = iota_vec(rows());
    const auto c = iota_vec(cols());
    return block(r, c);
}

double radius(const PointSet& x)
{
    if (x.empty())
        throw std::invalid_argument("radius: empty set");
    return x.coords().rowwise().norm().maxCoeff();
}

double max_pair_squared_distance(const PointSet& x, const PointSet& y, std::uint64_t seed, double exact_limit,
                                 Index sample_pairs)
{
    if (x.empty() || y.empty())
        throw std::invalid_argument("max_pair_squared_distance: empty set");
    double best = 0.0;
    if (static_cast<double>(x.size()) * static_cast<double>(y.size()) <= exact_limit) {
        for (Index i = 0; i < x.size(); ++i)
            for (Index j = 0; j < y.size(); ++j)
                best = std::max(best, squared_distance(x.point(i), y.point(j)));
        return best;
    }
    Rng rng(seed);
    for (Index s = 0; s < sample_pairs; ++s) {
        const auto i = static_cast<Index>(rng.below(static_cast<std::uint64_t>(x.size())));
        const auto j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(y.size())));
        best = std::max(best, squared_distance(x.point(i), y.point(j)));
    }
    return 1.02 * best;
}

KernelSpec derive_params(KernelType type, const PointSet& x, const PointSet& y, double sigma_fraction,
                         std::uint64_t seed)
{
    if (x.empty())
        throw std::invalid_argument("derive_params: empty X");
    switch (type) {
    case KernelType::Gaussian:
        if (!(sigma_fraction > 0.0))
            throw std::invalid_argument("derive_params: sigma fraction must be positive");
        return KernelSpec::gaussian(sigma_fraction * radius(x));
    case KernelType::RationalQuadratic:
        return KernelSpec::rational_quadratic(radius(x));
    case KernelType::BumpExp:
        if (y.empty())
            throw std::invalid_argument("derive_params: empty Y");
        return KernelSpec::bump_exp(0.8 / max_pair_squared_distance(x, y, seed));
    default:
        return KernelSpec::of(type);
    }
}

} // namespace geolr
