#include <doctest.h>

#include "geolr/factor.hpp"
#include "test_helpers.hpp"

using namespace geolr;

namespace {

double rel(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    return (a - b).norm() / b.norm();
}

PointSet line_points(std::initializer_list<double> v)
{
    PointSet::Storage c(static_cast<Index>(v.size()), 1);
    Index i = 0;
    for (double t : v)
        c(i++, 0) = t;
    return PointSet(c);
}

} // namespace

TEST_CASE("two-sided recovers a separable rank-one kernel")
{
    const PointSet x = line_points({0.5, -1.0, 2.0, 3.0});
    const PointSet y = line_points({1.0, 4.0, -2.0});
    const KernelMatrix k(KernelSpec::of(KernelType::Product), x, y);
    const Eigen::MatrixXd kd = k.dense();
    for (Index u = 0; u < 4; ++u)
        for (Index v = 0; v < 3; ++v)
            for (bool stab : {false, true}) {
                const auto f = two_sided(k, SubsetSelection::explicit_indices({u}),
                                         SubsetSelection::explicit_indices({v}), TwoSidedOptions{stab, 1e-10});
                CHECK(rel(f.dense(), kd) <= 1e-10);
            }
}

TEST_CASE("two-sided with full subsets is exact")
{
    const PointSet x = test::uniform_cloud(30, 2, 1);
    const PointSet y = test::uniform_cloud(25, 2, 2, 1.5, 2.5);
    const KernelMatrix k(KernelSpec::of(KernelType::InverseDistance), x, y);
    const auto f = two_sided(k, SubsetSelection::all(30), SubsetSelection::all(25));
    CHECK(rel(f.dense(), k.dense()) <= 1e-10);
    CHECK(f.rank() <= 25);
    CHECK(f.row_sample.size() == 30);
}

TEST_CASE("stabilized two-sided records its truncation")
{
    const PointSet x = test::uniform_cloud(200, 2, 3);
    const PointSet y = test::uniform_cloud(300, 2, 4);
    const KernelMatrix k(KernelSpec::gaussian(0.5), x, y);
    const auto s1 = fps_select(x, 60);
    const auto s2 = fps_select(y, 60);
    const auto f = two_sided(k, s1, s2, TwoSidedOptions{true, 1e-10});
    REQUIRE(f.stabilization);
    CHECK(f.stabilization->epsilon == 1e-10);
    CHECK(f.stabilization->effective_rank < 60);
    CHECK(f.rank() == f.stabilization->effective_rank);
    const auto plain = two_sided(k, s1, s2);
    CHECK_FALSE(plain.stabilization);
}

TEST_CASE("matvec agrees with dense reconstruction")
{
    const PointSet x = test::uniform_cloud(80, 3, 5);
    const PointSet y = test::uniform_cloud(70, 3, 6, 2.0, 3.0);
    const KernelMatrix k(KernelSpec::of(KernelType::InverseDistance), x, y);
    SelectorConfig sel;
    const std::vector<LowRankFactorization> fs{
        two_sided(k, fps_select(x, 8), fps_select(y, 8)),
        one_sided(k, OneSidedOptions{SampleSide::SampleY, 6, 2.0, sel, 2.0}),
        one_sided(k, OneSidedOptions{SampleSide::SampleX, 6, 2.0, sel, 2.0}),
        aca(k, AcaOptions{5}),
    };
    const Eigen::VectorXd v = test::random_matrix(70, 1, 7);
    const Eigen::VectorXd w = test::random_matrix(80, 1, 8);
    for (const auto& f : fs) {
        const Eigen::MatrixXd d = f.dense();
        CHECK((f.apply(v) - d * v).norm() <= 1e-12 * (d * v).norm());
        CHECK((f.apply_transpose(w) - d.transpose() * w).norm() <= 1e-12 * (d.transpose() * w).norm());
    }
}

TEST_CASE("one-sided on an exactly low-rank kernel")
{
    const PointSet x = test::uniform_cloud(60, 1, 9, -1.0, 1.0);
    const PointSet y = test::uniform_cloud(50, 1, 10, -1.0, 1.0);
    const KernelMatrix k(KernelSpec::of(KernelType::Poly123), x, y);
    const auto f = one_sided(k, OneSidedOptions{SampleSide::SampleY, 3, 2.0, {}, 2.0});
    CHECK(rel(f.dense(), k.dense()) <= 1e-9);
    CHECK(f.rank() == 3);
    CHECK(f.col_sample.size() == 6);
}

TEST_CASE("one-sided interpolation matrix has an identity block")
{
    const PointSet x = test::uniform_cloud(90, 2, 11);
    const PointSet y = test::uniform_cloud(80, 2, 12, 1.2, 2.0);
    const KernelMatrix k(KernelSpec::of(KernelType::LogDistance), x, y);
    const auto f = one_sided(k, OneSidedOptions{SampleSide::SampleY, 10, 2.0, {}, 2.0});
    CHECK(f.left.cwiseAbs().maxCoeff() <= 2.0);
    for (std::size_t i = 0; i < f.skeleton.size(); ++i) {
        const Eigen::RowVectorXd row = f.left.row(f.skeleton[i]);
        CHECK(row(static_cast<Index>(i)) == 1.0);
        CHECK(row.cwiseAbs().sum() == 1.0);
    }
    CHECK(f.right == k.rows_block(f.skeleton));
}

TEST_CASE("one-sided with the whole column set is exact")
{
    const PointSet x = test::uniform_cloud(40, 2, 13);
    const PointSet y = test::uniform_cloud(12, 2, 14, 2.0, 3.0);
    const KernelMatrix k(KernelSpec::of(KernelType::InverseDistance), x, y);
    const auto f = one_sided_from_sample(k, SampleSide::SampleY, SubsetSelection::all(12), 12);
    CHECK(rel(f.dense(), k.dense()) <= 1e-10);
    const auto g = one_sided(k, OneSidedOptions{SampleSide::SampleY, 12, 2.0, {}, 2.0});
    CHECK(rel(g.dense(), k.dense()) <= 1e-10);
    CHECK_THROWS(one_sided_from_sample(k, SampleSide::SampleY, SubsetSelection::explicit_indices({0, 1}), 3));
}

TEST_CASE("symmetric factorization")
{
    const PointSet x = test::uniform_cloud(300, 2, 15);
    const KernelMatrix k(KernelSpec::gaussian(0.3), x, x);
    const auto f = symmetric(k, SymmetricOptions{30, 2.0, {}, 2.0});
    const Eigen::MatrixXd d = f.dense();
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * spectral_norm(k.dense()));

    const PointSet small = test::uniform_cloud(25, 2, 16);
    const KernelMatrix ks(KernelSpec::gaussian(1.0), small, small);
    const auto full = symmetric_from_sample(ks, SubsetSelection::all(25), 25);
    CHECK(rel(full.dense(), ks.dense()) <= 1e-10);

    const PointSet copy = x;
    CHECK_THROWS(symmetric(KernelMatrix(KernelSpec::gaussian(0.3), x, copy), SymmetricOptions{5}));
}

TEST_CASE("aca")
{
    const PointSet x = line_points({1.0, 2.0, 3.0, -1.0});
    const PointSet y = line_points({2.0, 0.5, -3.0});
    const KernelMatrix rank1(KernelSpec::of(KernelType::Product), x, y);
    const auto f1 = aca(rank1, AcaOptions{1});
    CHECK((f1.dense() - rank1.dense()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK_FALSE(f1.stopped_early);

    const auto f2 = aca(rank1, AcaOptions{3});
    CHECK(f2.stopped_early);
    CHECK(f2.rank() == 1);

    const PointSet a = test::uniform_cloud(70, 1, 17, -1.0, 1.0);
    const PointSet b = test::uniform_cloud(60, 1, 18, -1.0, 1.0);
    const KernelMatrix poly(KernelSpec::of(KernelType::Poly123), a, b);
    CHECK(rel(aca(poly, AcaOptions{3}).dense(), poly.dense()) <= 1e-9);

    // Default start is the row farthest from the centroid of Y.
    const auto f3 = aca(rank1, AcaOptions{1, AcaStart::FarthestFromCentroid});
    const auto f4 = aca(rank1, AcaOptions{1, AcaStart::Explicit, 2});
    CHECK(f3.row_sample.front() == 2);
    CHECK(f4.row_sample.front() == 2);
}

TEST_CASE("error evaluation")
{
    const PointSet x = test::uniform_cloud(60, 2, 19);
    const PointSet y = test::uniform_cloud(50, 2, 20, 1.5, 2.5);
    const KernelMatrix k(KernelSpec::of(KernelType::InverseDistance), x, y);
    const auto exact = two_sided(k, SubsetSelection::all(60), SubsetSelection::all(50));
    CHECK(evaluate_error(exact, k, ErrorNorm::Rel2) <= 1e-12);
    CHECK(evaluate_error(exact, k, ErrorNorm::MaxNorm) <= 1e-12 * k.dense().cwiseAbs().maxCoeff());

    LowRankFactorization empty;
    empty.left = Eigen::MatrixXd::Zero(60, 0);
    empty.right = Eigen::MatrixXd::Zero(0, 50);
    CHECK(evaluate_error(empty, k, ErrorNorm::Rel2) == doctest::Approx(1.0).epsilon(1e-14));

    const Eigen::MatrixXd kd = k.dense();
    for (Index r : {1, 3, 6, 10}) {
        const auto f = one_sided(k, OneSidedOptions{SampleSide::SampleY, r, 2.0, {}, 2.0});
        CHECK(evaluate_error(f, k, ErrorNorm::Rel2) >= best_rank_r_error(kd, r) - 1e-12);
        const auto e = evaluate_errors(f, kd);
        CHECK(e.rel2 == doctest::Approx(evaluate_error(f, k, ErrorNorm::Rel2)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(evaluate_error(exact, k, ErrorNorm::Rel2, 10), std::length_error);
}

TEST_CASE("streaming estimator agrees with the dense error")
{
    const PointSet x = test::uniform_cloud(400, 3, 21);
    const PointSet y = test::uniform_cloud(350, 3, 22, 2.0, 3.0);
    const KernelMatrix k(KernelSpec::of(KernelType::LogDistance), x, y);
    for (Index r : {2, 5, 12}) {
        const auto f = one_sided(k, OneSidedOptions{SampleSide::SampleY, r, 2.0, {}, 2.0});
        const double dense = evaluate_error(f, k, ErrorNorm::Rel2);
        const double est = estimate_rel2_error(f, k, 3, 30, 64);
        CHECK(est <= dense * (1.0 + 1e-10));
        CHECK(est >= 0.9 * dense);
    }
}

TEST_CASE("factorizations are deterministic")
{
    const PointSet x = test::uniform_cloud(100, 2, 23);
    const PointSet y = test::uniform_cloud(90, 2, 24);
    const KernelMatrix k(KernelSpec::gaussian(0.4), x, y);
    SelectorConfig sel;
    sel.method = SelectionMethod::Uniform;
    sel.seed = 5;
    const OneSidedOptions opt{SampleSide::SampleY, 8, 2.0, sel, 2.0};
    CHECK(one_sided(k, opt).left == one_sided(k, opt).left);
    CHECK(aca(k, AcaOptions{7}).right == aca(k, AcaOptions{7}).right);
}
