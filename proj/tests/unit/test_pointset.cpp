#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "geolr/selectors.hpp"
#include "test_helpers.hpp"

using namespace geolr;
using geolr::test::from_rows;

TEST_CASE("distance")
{
    const Eigen::Vector3d a(0, 0, 0), b(1, 0, 0);
    CHECK(distance(a, b) == 1.0);
    const Eigen::Vector2d c(3, 4), o(0, 0);
    CHECK(distance(c, c) == 0.0);
    CHECK(distance(o, c) == 5.0);
    CHECK(distance(c, o) == distance(o, c));
    CHECK_THROWS_AS(distance(a, c), std::invalid_argument);
}

TEST_CASE("delta")
{
    const PointSet z = test::line(3);
    const std::vector<Index> all{0, 1, 2};
    CHECK(delta(z, all) == 0.0);
    CHECK(delta(z, from_rows({{0.0}})) == 2.0);
    CHECK_THROWS(delta(z, std::vector<Index>{}));

    const PointSet cloud = test::uniform_cloud(100, 2, 3);
    const auto s = fps_select(cloud, 10);
    const std::vector<Index>& idx = s.indices;
    CHECK(delta(cloud, s) == doctest::Approx(test::brute_delta(cloud, cloud.subset(idx))).epsilon(1e-15));
}

TEST_CASE("delta is nonincreasing when the subset grows")
{
    const PointSet z = test::uniform_cloud(80, 3, 9);
    const auto order = sample_indices(80, 80, 4);
    double prev = std::numeric_limits<double>::infinity();
    for (Index k = 1; k <= 80; ++k) {
        const double d = delta(z, std::span<const Index>(order.data(), static_cast<std::size_t>(k)));
        CHECK(d <= prev);
        prev = d;
    }
    CHECK(prev == 0.0);
}

TEST_CASE("standardize")
{
    auto [s, rec] = standardize(from_rows({{0.0}, {2.0}}));
    CHECK(s.coords()(0, 0) == -1.0);
    CHECK(s.coords()(1, 0) == 1.0);
    CHECK(rec.mean(0) == 1.0);
    CHECK(rec.scale(0) == 1.0);

    const PointSet raw = test::uniform_cloud(5, 3, 21, -4.0, 9.0);
    auto [t, r2] = standardize(raw);
    for (Index j = 0; j < 3; ++j) {
        const auto col = t.coords().col(j);
        const double mean = col.mean();
        CHECK(std::abs(mean) < 1e-12);
        CHECK(std::abs((col.array() - mean).square().mean() - 1.0) < 1e-12);
    }
    auto [again, r3] = standardize(t);
    CHECK((again.coords() - t.coords()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((r2.invert(t).coords() - raw.coords()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK_FALSE(r2.constant_dimension);

    auto [c, rc] = standardize(from_rows({{1.0, 5.0}, {3.0, 5.0}}));
    CHECK(rc.constant_dimension);
    CHECK(rc.scale(1) == 1.0);
    CHECK(c.coords()(0, 1) == 0.0);
}

TEST_CASE("subsample without replacement")
{
    const PointSet ps = test::line(4);
    const PointSet all = subsample_without_replacement(ps, 4, 7);
    std::set<double> vals;
    for (Index i = 0; i < 4; ++i)
        vals.insert(all.coords()(i, 0));
    CHECK(vals == std::set<double>{0, 1, 2, 3});
    CHECK(subsample_without_replacement(ps, 2, 5).coords() == subsample_without_replacement(ps, 2, 5).coords());
    CHECK_THROWS(subsample_without_replacement(ps, 5, 0));

    std::set<std::pair<Index, Index>> pairs;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        auto idx = sample_indices(4, 2, seed);
        CHECK(idx[0] != idx[1]);
        pairs.insert({std::min(idx[0], idx[1]), std::max(idx[0], idx[1])});
    }
    CHECK(pairs.size() == 6);
}

TEST_CASE("subset selection validation")
{
    const PointSet ps = test::line(3);
    CHECK_NOTHROW(SubsetSelection::explicit_indices({0, 2}).validate(ps));
    CHECK_THROWS(SubsetSelection::explicit_indices({0, 3}).validate(ps));
    CHECK_THROWS(SubsetSelection::explicit_indices({1, 1}).validate(ps));
}

TEST_CASE("csv parsing")
{
    const PointSet ps = parse_csv("a,b\n1,2\n3,4.5\n");
    CHECK(ps.size() == 2);
    CHECK(ps.dim() == 2);
    CHECK(ps.coords()(1, 1) == 4.5);
    CHECK(parse_csv("1,2\n3,4\n").size() == 2);
    CHECK_THROWS(parse_csv("1,2\n3\n"));

    const std::string path = "geolr_unit_points.csv";
    std::ofstream(path) << "0.5,1\n2,3\n";
    CHECK(read_csv(path).coords()(0, 0) == 0.5);
    std::remove(path.c_str());
    CHECK_THROWS(read_csv("does-not-exist.csv"));
}

TEST_CASE("shifted manifold geometry")
{
    SyntheticSpec spec;
    spec.kind = SyntheticKind::ShiftedManifold;
    spec.n = 1400;
    spec.shift = 2.7;
    spec.seed = 1;
    const auto [x, y] = generate_synthetic(spec);
    CHECK(x.size() == 1400);
    CHECK(y.size() == 1400);
    CHECK(x.dim() == 3);
    CHECK((y.coords().col(2) - x.coords().col(2)).cwiseAbs().maxCoeff() == doctest::Approx(2.7));

    auto min_distance = [](const PointSet& a, const PointSet& b) {
        double dmin = std::numeric_limits<double>::infinity();
        for (Index i = 0; i < a.size(); ++i)
            for (Index j = 0; j < b.size(); ++j)
                dmin = std::min(dmin, distance(a.point(i), b.point(j)));
        return dmin;
    };
    CHECK(min_distance(x, y) == doctest::Approx(1.0).epsilon(0.03));

    spec.shift = 2.0;
    const auto [x2, y2] = generate_synthetic(spec);
    CHECK(min_distance(x2, y2) == doctest::Approx(0.43).epsilon(0.05));
    const double gap = y2.coords().col(2).minCoeff() - x2.coords().col(2).maxCoeff();
    CHECK(gap >= 0.0);
    CHECK(gap < 0.1);

    spec.shift = 0.5;
    const auto [x3, y3] = generate_synthetic(spec);
    CHECK(min_distance(x3, y3) == doctest::Approx(0.12).epsilon(0.05));
    CHECK(y3.coords().col(2).minCoeff() < x3.coords().col(2).maxCoeff());
}

TEST_CASE("uniform boxes and determinism")
{
    SyntheticSpec spec;
    spec.kind = SyntheticKind::UniformBoxes;
    spec.n = 500;
    spec.dim = 3;
    spec.seed = 8;
    const auto [x, y] = generate_synthetic(spec);
    CHECK(x.coords().minCoeff() >= 0.0);
    CHECK(x.coords().maxCoeff() <= 1.0);
    CHECK(y.coords().minCoeff() >= 2.0);
    CHECK(y.coords().maxCoeff() <= 3.0);
    const auto [x2, y2] = generate_synthetic(spec);
    CHECK(x2.coords() == x.coords());
    CHECK(y2.coords() == y.coords());
    CHECK_THROWS(parse_synthetic_kind("spiral"));
}

TEST_CASE("mixture sizes")
{
    SyntheticSpec spec;
    spec.kind = SyntheticKind::GaussianMixture;
    spec.dim = 12;
    spec.m = 70;
    spec.n = 90;
    const auto [x, y] = generate_synthetic(spec);
    CHECK(x.size() == 70);
    CHECK(y.size() == 90);
    CHECK(x.dim() == 12);
}
