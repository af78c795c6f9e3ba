#include "geolr/pointset.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "geolr/rng.hpp"

namespace geolr {

PointSet::PointSet(Storage coords, std::string label) : coords_(std::move(coords)), label_(std::move(label))
{
    if (coords_.cols() < 1)
        throw std::invalid_argument("PointSet: dimension must be at least 1");
}

PointSet PointSet::subset(std::span<const Index> indices) const
{
    Storage out(static_cast<Index>(indices.size()), dim());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const Index k = indices[i];
        if (k < 0 || k >= size())
            throw std::out_of_range("PointSet::subset: index out of range");
        out.row(static_cast<Index>(i)) = coords_.row(k);
    }
    return PointSet(std::move(out), label_);
}

Eigen::RowVectorXd PointSet::centroid() const
{
    if (empty())
        throw std::invalid_argument("PointSet::centroid: empty set");
    return coords_.colwise().mean();
}

const char* to_string(SelectionMethod m)
{
    switch (m) {
    case SelectionMethod::Fps: return "fps";
    case SelectionMethod::Uniform: return "uniform";
    case SelectionMethod::Mixed: return "mixed";
    case SelectionMethod::AnchorGrid: return "anchor-grid";
    case SelectionMethod::Explicit: return "explicit";
    }
    return "?";
}

void SubsetSelection::validate(const PointSet& source) const
{
    if (size() > source.size())
        throw std::invalid_argument("SubsetSelection: more indices than source points");
    std::vector<char> seen(static_cast<std::size_t>(source.size()), 0);
    for (Index i : indices) {
        if (i < 0 || i >= source.size())
            throw std::out_of_range("SubsetSelection: index out of range");
        if (seen[static_cast<std::size_t>(i)]++)
            throw std::invalid_argument("SubsetSelection: repeated index");
    }
}

SubsetSelection SubsetSelection::all(Index n)
{
    std::vector<Index> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), Index{0});
    return explicit_indices(std::move(idx));
}

PointSet StandardizationRecord::apply(const PointSet& raw) const
{
    PointSet::Storage out = (raw.coords().rowwise() - mean).array().rowwise() / scale.array();
    return PointSet(std::move(out), raw.label());
}

PointSet StandardizationRecord::invert(const PointSet& standardized) const
{
    PointSet::Storage out = (standardized.coords().array().rowwise() * scale.array()).matrix().rowwise() + mean;
    return PointSet(std::move(out), standardized.label());
}

double delta(const PointSet& z, const PointSet& s)
{
    if (s.empty())
        throw std::invalid_argument("delta: empty subset");
    if (z.dim() != s.dim())
        throw std::invalid_argument("delta: dimension mismatch");
    double worst = 0.0;
    for (Index i = 0; i < z.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (Index j = 0; j < s.size() && best > worst; ++j)
            best = std::min(best, squared_distance(z.point(i), s.point(j)));
        worst = std::max(worst, best);
    }
    return std::sqrt(worst);
}

double delta(const PointSet& z, std::span<const Index> s)
{
    return delta(z, z.subset(s));
}

std::pair<PointSet, StandardizationRecord> standardize(const PointSet& raw)
{
    if (raw.size() < 2)
        throw std::invalid_argument("standardize: need at least two points");
    StandardizationRecord rec;
    rec.mean = raw.coords().colwise().mean();
    rec.scale.resize(raw.dim());
    for (Index k = 0; k < raw.dim(); ++k) {
        const double var = (raw.coords().col(k).array() - rec.mean(k)).square().mean();
        if (var > 0.0) {
            rec.scale(k) = std::sqrt(var);
        } else {
            rec.scale(k) = 1.0;
            rec.constant_dimension = true;
        }
    }
    return {rec.apply(raw), std::move(rec)};
}

std::vector<Index> sample_indices(Index n, Index k, std::uint64_t seed)
{
    if (k < 0 || k > n)
        throw std::invalid_argument("sample_indices: sample size exceeds population");
    std::vector<Index> pool(static_cast<std::size_t>(n));
    std::iota(pool.begin(), pool.end(), Index{0});
    Rng rng(seed);
    for (Index i = 0; i < k; ++i) {
        const auto j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(n - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(k));
    return pool;
}

PointSet subsample_without_replacement(const PointSet& ps, Index k, std::uint64_t seed)
{
    if (k > ps.size())
        throw std::invalid_argument("subsample_without_replacement: k exceeds set size");
    const auto idx = sample_indices(ps.size(), k, seed);
    return ps.subset(idx);
}

namespace {

bool parse_row(const std::string& line, std::vector<double>& out)
{
    out.clear();
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        const auto first = cell.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            return false;
        const auto last = cell.find_last_not_of(" \t\r");
        cell = cell.substr(first, last - first + 1);
        char* end = nullptr;
        const double v = std::strtod(cell.c_str(), &end);
        if (end != cell.c_str() + cell.size())
            return false;
        out.push_back(v);
    }
    return !out.empty();
}

} // namespace

PointSet parse_csv(const std::string& text, const std::string& label)
{
    std::stringstream in(text);
    std::string line;
    std::vector<double> row;
    std::vector<double> values;
    Index dim = -1;
    Index rows = 0;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        if (!parse_row(line, row)) {
            if (first) {
                first = false;
                continue;
            }
            throw std::runtime_error("read_csv: non-numeric row " + std::to_string(rows + 1));
        }
        first = false;
        if (dim < 0)
            dim = static_cast<Index>(row.size());
        else if (dim != static_cast<Index>(row.size()))
            throw std::runtime_error("read_csv: ragged row " + std::to_string(rows + 1));
        values.insert(values.end(), row.begin(), row.end());
        ++rows;
    }
    if (rows == 0)
        throw std::runtime_error("read_csv: no numeric rows");
    PointSet::Storage coords = Eigen::Map<PointSet::Storage>(values.data(), rows, dim);
    return PointSet(std::move(coords), label);
}

PointSet read_csv(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_csv: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), path);
}

SyntheticKind parse_synthetic_kind(const std::string& name)
{
    if (name == "shifted-manifold") return SyntheticKind::ShiftedManifold;
    if (name == "uniform-boxes") return SyntheticKind::UniformBoxes;
    if (name == "two-clusters-2d") return SyntheticKind::TwoClusters2D;
    if (name == "gaussian-mixture") return SyntheticKind::GaussianMixture;
    throw std::invalid_argument("unknown synthetic dataset '" + name + "'");
}

const char* to_string(SyntheticKind k)
{
    switch (k) {
    case SyntheticKind::ShiftedManifold: return "shifted-manifold";
    case SyntheticKind::UniformBoxes: return "uniform-boxes";
    case SyntheticKind::TwoClusters2D: return "two-clusters-2d";
    case SyntheticKind::GaussianMixture: return "gaussian-mixture";
    }
    return "?";
}

namespace {

PointSet::Storage half_shell_with_cubes(Index n, Rng& rng)
{
    const Index shell = n * 5 / 7;
    const Index cubes = n - shell;
    PointSet::Storage p(n, 3);
    for (Index i = 0; i < shell; ++i) {
        Eigen::RowVector3d v;
        do {
            v << rng.normal(), rng.normal(), rng.normal();
        } while (v.norm() < 1e-12);
        v /= v.norm();
        v(2) = std::abs(v(2));
        p.row(i) = v;
    }
    const double centres[4][3] = {
        {0.79, 0.79, -0.854}, {-0.79, 0.79, -0.854}, {-0.79, -0.79, -0.854}, {0.79, -0.79, -0.854}};
    constexpr double half_side = 0.1;
    for (Index i = 0; i < cubes; ++i) {
        const auto& c = centres[(i * 4) / cubes];
        for (int k = 0; k < 3; ++k)
            p(shell + i, k) = c[k] + rng.uniform(-half_side, half_side);
    }
    return p;
}

PointSet::Storage two_clusters(Index n, Rng& rng)
{
    PointSet::Storage p(n, 2);
    const Index dense = n * 4 / 5;
    for (Index i = 0; i < n; ++i) {
        if (i < dense)
            p.row(i) << 0.1 * rng.normal(), 0.1 * rng.normal();
        else
            p.row(i) << rng.uniform(1.0, 3.0), rng.uniform(0.0, 2.0);
    }
    return p;
}

struct Mixture
{
    Eigen::MatrixXd centres;            // clusters x d
    std::vector<Eigen::MatrixXd> bases; // d x 3 each
    std::vector<double> weights;
};

Mixture make_mixture(const SyntheticSpec& spec, Rng& rng)
{
    Mixture mix;
    const Index d = spec.dim;
    mix.centres.resize(spec.clusters, d);
    for (Index c = 0; c < spec.clusters; ++c)
        for (Index k = 0; k < d; ++k)
            mix.centres(c, k) = 4.0 * rng.normal();
    const Index sub = std::min<Index>(3, d);
    for (Index c = 0; c < spec.clusters; ++c) {
        Eigen::MatrixXd g(d, sub);
        for (Index i = 0; i < d; ++i)
            for (Index j = 0; j < sub; ++j)
                g(i, j) = rng.normal();
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        mix.bases.push_back(qr.householderQ() * Eigen::MatrixXd::Identity(d, sub));
    }
    double w = 1.0;
    for (Index c = 0; c < spec.clusters; ++c, w *= 0.7)
        mix.weights.push_back(w);
    return mix;
}

PointSet::Storage draw_mixture(const Mixture& mix, const SyntheticSpec& spec, Index count, Rng& rng)
{
    const Index d = spec.dim;
    const Index sub = mix.bases.front().cols();
    const double total = std::accumulate(mix.weights.begin(), mix.weights.end(), 0.0);
    const double spacing = 4.0 * std::sqrt(2.0 * static_cast<double>(d));
    PointSet::Storage p(count, d);
    for (Index i = 0; i < count; ++i) {
        double u = rng.uniform() * total;
        std::size_t c = 0;
        while (c + 1 < mix.weights.size() && u >= mix.weights[c]) {
            u -= mix.weights[c];
            ++c;
        }
        Eigen::VectorXd z(sub);
        for (Index j = 0; j < sub; ++j)
            z(j) = rng.normal();
        Eigen::VectorXd noise(d);
        for (Index k = 0; k < d; ++k)
            noise(k) = rng.normal();
        const Eigen::VectorXd offset =
            spec.spread * spacing * (mix.bases[c] * z / std::sqrt(static_cast<double>(sub)) + 0.05 * noise / std::sqrt(static_cast<double>(d)));
        p.row(i) = mix.centres.row(static_cast<Index>(c)) + offset.transpose();
    }
    return p;
}

} // namespace

std::pair<PointSet, PointSet> generate_synthetic(const SyntheticSpec& spec)
{
    if (spec.n < 1)
        throw std::invalid_argument("generate_synthetic: n must be positive");
    Rng rng(spec.seed);
    switch (spec.kind) {
    case SyntheticKind::ShiftedManifold: {
        PointSet::Storage x = half_shell_with_cubes(spec.n, rng);
        PointSet::Storage y = x;
        y.col(2).array() += spec.shift;
        return {PointSet(std::move(x), "X"), PointSet(std::move(y), "Y")};
    }
    case SyntheticKind::UniformBoxes: {
        if (spec.dim < 1)
            throw std::invalid_argument("generate_synthetic: dim must be positive");
        PointSet::Storage x(spec.n, spec.dim), y(spec.n, spec.dim);
        for (Index i = 0; i < spec.n; ++i)
            for (Index k = 0; k < spec.dim; ++k)
                x(i, k) = rng.uniform();
        for (Index i = 0; i < spec.n; ++i)
            for (Index k = 0; k < spec.dim; ++k)
                y(i, k) = rng.uniform(2.0, 3.0);
        return {PointSet(std::move(x), "X"), PointSet(std::move(y), "Y")};
    }
    case SyntheticKind::TwoClusters2D: {
        PointSet::Storage x = two_clusters(spec.m > 0 ? spec.m : spec.n, rng);
        PointSet::Storage y = two_clusters(spec.n, rng);
        return {PointSet(std::move(x), "X"), PointSet(std::move(y), "Y")};
    }
    case SyntheticKind::GaussianMixture: {
        if (spec.dim < 1 || spec.clusters < 1)
            throw std::invalid_argument("generate_synthetic: mixture needs dim and clusters");
        const Mixture mix = make_mixture(spec, rng);
        const Index m = spec.m > 0 ? spec.m : spec.n;
        PointSet::Storage x = draw_mixture(mix, spec, m, rng);
        PointSet::Storage y = draw_mixture(mix, spec, spec.n, rng);
        return {PointSet(std::move(x), "X"), PointSet(std::move(y), "Y")};
    }
    }
    throw std::invalid_argument("generate_synthetic: unknown kind");
}

} // namespace geolr
