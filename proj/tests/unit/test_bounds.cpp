#include <doctest.h>

#include <map>

#include "geolr/bounds.hpp"
#include "test_helpers.hpp"

using namespace geolr;

namespace {

std::map<BoundKind, BoundReport> by_kind(const std::vector<BoundReport>& v)
{
    std::map<BoundKind, BoundReport> out;
    for (const auto& r : v)
        out[r.kind] = r;
    return out;
}

} // namespace

TEST_CASE("bilinear perturbation examples")
{
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
    const Eigen::Vector2d e1(1, 0), e2(0, 1);
    const auto same = lemma21_check(a, e1, e1, e2, e2);
    CHECK(same.lhs == 0.0);
    CHECK(same.rhs == 0.0);

    const auto r = lemma21_check(a, e1, e2, e1, e1);
    CHECK(r.lhs == 1.0);
    CHECK(r.rhs == doctest::Approx(std::sqrt(2.0)));
    CHECK(r.holds());
    CHECK_THROWS(lemma21_check(a, e1, Eigen::Vector3d::Zero(), e1, e1));
}

TEST_CASE("bilinear perturbation on random instances")
{
    geolr::Rng rng(1);
    for (int t = 0; t < 1000; ++t) {
        const Index p = 1 + static_cast<Index>(rng.below(6));
        const Index q = 1 + static_cast<Index>(rng.below(6));
        const auto s = static_cast<std::uint64_t>(t) * 5;
        const Eigen::MatrixXd a = test::random_matrix(p, q, s);
        const Eigen::VectorXd al = test::random_matrix(p, 1, s + 1);
        const Eigen::VectorXd ah = test::random_matrix(p, 1, s + 2);
        const Eigen::VectorXd be = test::random_matrix(q, 1, s + 3);
        const Eigen::VectorXd bh = test::random_matrix(q, 1, s + 4);
        CHECK(lemma21_check(a, al, ah, be, bh).holds());
    }
}

TEST_CASE("discrete lipschitz constants")
{
    const PointSet z1 = test::uniform_cloud(6, 1, 2);
    const PointSet z2 = test::uniform_cloud(5, 1, 3);
    const PointSet s1 = test::uniform_cloud(3, 1, 4);
    const PointSet s2 = test::uniform_cloud(2, 1, 5);
    auto sum = [](const auto& x, const auto& y) { return x.coeff(0) + y.coeff(0); };
    CHECK(lipschitz_joint(sum, z1, z2, s1, s2).get() <= std::sqrt(2.0) + 1e-12);
    auto constant = [](const auto&, const auto&) { return 4.0; };
    CHECK(lipschitz_joint(constant, z1, z2, s1, s2).get() == 0.0);
    CHECK(lipschitz_fixed_row(constant, z1, z2, s2).get() == 0.0);

    // Coincident points with different values.
    auto jump = [](const auto& x, const auto&) { return x.coeff(0) > 0.5 ? 1.0 : 0.0; };
    const PointSet p = test::from_rows({{0.7}});
    CHECK(lipschitz_fixed_col(jump, p, p, p).get() == 0.0);
    LipschitzValue l;
    l.add(1.0, 0.0);
    CHECK(l.infinite);
    CHECK(std::isinf(l.get()));
}

TEST_CASE("discrete lipschitz of a gaussian against a fine grid slope")
{
    const KernelSpec g = KernelSpec::gaussian(0.3);
    auto grid = [](Index n, double lo, double hi) {
        PointSet::Storage c(n * n, 2);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j) {
                c(i * n + j, 0) = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
                c(i * n + j, 1) = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n - 1);
            }
        return PointSet(c);
    };
    const PointSet w = test::from_rows({{0.0, 0.0}});
    const PointSet coarse = grid(20, 0.0, 1.0);
    const double discrete = lipschitz_fixed_row(g, w, coarse, coarse).get();
    // Analytic slope of exp(-t^2/s^2) peaks at t = s / sqrt(2).
    const double analytic = std::sqrt(2.0) / 0.3 * std::exp(-0.5);
    CHECK(discrete <= analytic + 1e-12);
    CHECK(discrete >= 0.95 * analytic);
    const PointSet fine = grid(40, 0.0, 1.0);
    CHECK(lipschitz_fixed_row(g, w, fine, fine).get() == doctest::Approx(discrete).epsilon(0.05));
}

TEST_CASE("two-sided bounds hold and match the generic constants")
{
    const PointSet x = test::uniform_cloud(40, 2, 6);
    const PointSet y = test::uniform_cloud(35, 2, 7, 0.5, 1.5);
    const KernelSpec g = KernelSpec::gaussian(0.8);
    const KernelMatrix k(g, x, y);
    const auto s1 = fps_select(x, 5);
    const auto s2 = fps_select(y, 4);
    const auto reps = by_kind(check_two_sided(k, s1, s2));
    CHECK(reps.size() == 6);
    for (const auto& [kind, r] : reps) {
        INFO(to_string(kind), " lhs ", r.lhs, " rhs ", r.rhs);
        CHECK(r.holds());
        CHECK_FALSE(r.error);
    }
    const auto& t25 = reps.at(BoundKind::Thm25Geometric);
    const PointSet xs = x.subset(s1.indices);
    const PointSet ys = y.subset(s2.indices);
    CHECK(t25.terms.at("L_joint") == doctest::Approx(lipschitz_joint(g, x, y, xs, ys).get()).epsilon(1e-12));
    CHECK(t25.terms.at("L_X_S1_at_S2") == doctest::Approx(lipschitz_fixed_col(g, x, xs, ys).get()).epsilon(1e-12));
    CHECK(t25.terms.at("L_Y_S2_at_S1") == doctest::Approx(lipschitz_fixed_row(g, xs, y, ys).get()).epsilon(1e-12));
    CHECK(t25.terms.at("delta_X_S1") == doctest::Approx(delta(x, s1)));
    CHECK(t25.terms.at("delta_Y_S2") == doctest::Approx(delta(y, s2)));
    const double c1 = t25.terms.at("L_joint") + 2.0 * t25.terms.at("L_X_S1_at_S2");
    CHECK(t25.terms.at("C1") == doctest::Approx(c1));
    CHECK(reps.at(BoundKind::Thm23MaxNorm).rhs >= reps.at(BoundKind::Thm22Entrywise).rhs);
}

TEST_CASE("full subsets make the geometric bound vanish")
{
    const PointSet x = test::uniform_cloud(15, 2, 8);
    const PointSet y = test::uniform_cloud(12, 2, 9, 2.0, 3.0);
    const KernelMatrix k(KernelSpec::of(KernelType::LogDistance), x, y);
    const auto reps = by_kind(check_two_sided(k, SubsetSelection::all(15), SubsetSelection::all(12)));
    const auto& r = reps.at(BoundKind::Thm25Geometric);
    CHECK(r.rhs == 0.0);
    CHECK(r.lhs <= 1e-10);
}

TEST_CASE("one-sided bounds")
{
    const PointSet x = test::uniform_cloud(30, 2, 10);
    const PointSet y = test::uniform_cloud(40, 2, 11, 1.5, 2.5);
    const KernelMatrix k(KernelSpec::of(KernelType::LogDistance), x, y);
    for (Index r : {2, 5, 9}) {
        const auto reps = by_kind(check_one_sided(k, fps_select(y, r)));
        REQUIRE(reps.size() == 2);
        const auto& t33 = reps.at(BoundKind::Thm33OneSided);
        const auto& t34 = reps.at(BoundKind::Thm34OneSidedGeometric);
        CHECK(t33.holds());
        CHECK(t34.holds());
        CHECK(t33.terms.at("r") == static_cast<double>(r));
        CHECK(t33.rhs == doctest::Approx(t33.terms.at("T_X") + 2.0 * r * t33.terms.at("T_I")));
    }
    const PointSet yf = test::uniform_cloud(20, 2, 13, 1.5, 2.5);
    const KernelMatrix kf(KernelSpec::of(KernelType::LogDistance), x, yf);
    const auto full = by_kind(check_one_sided(kf, SubsetSelection::all(20)));
    CHECK(full.at(BoundKind::Thm34OneSidedGeometric).rhs == 0.0);
    CHECK(full.at(BoundKind::Thm33OneSided).lhs <= 1e-10);
}

TEST_CASE("size guard and json")
{
    const PointSet x = test::uniform_cloud(30, 2, 12);
    const KernelMatrix k(KernelSpec::gaussian(1.0), x, x);
    CHECK_THROWS_AS(check_two_sided(k, fps_select(x, 3), fps_select(x, 3), 20), std::length_error);
    CHECK_THROWS_AS(check_one_sided(k, fps_select(x, 3), 2.0, 20), std::length_error);
    BoundReport r;
    r.kind = BoundKind::Thm25Geometric;
    r.terms["L_joint"] = std::numeric_limits<double>::infinity();
    r.error = "infinite";
    const auto j = to_json(r);
    CHECK(j["bound"] == "thm25-geometric");
    CHECK(j["terms"]["L_joint"] == "inf");
    CHECK_FALSE(r.holds());
}
