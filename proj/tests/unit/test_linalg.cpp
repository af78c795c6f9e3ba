#include <doctest.h>

#include "geolr/linalg.hpp"
#include "test_helpers.hpp"

using namespace geolr;

namespace {

Eigen::MatrixXd permuted(const Eigen::MatrixXd& m, const std::vector<Index>& perm)
{
    Eigen::MatrixXd out(m.rows(), m.cols());
    for (Index j = 0; j < m.cols(); ++j)
        out.col(j) = m.col(perm[static_cast<std::size_t>(j)]);
    return out;
}

Eigen::MatrixXd id_reconstruction(const Eigen::MatrixXd& m, const InterpolativeDecomposition<double>& id)
{
    Eigen::MatrixXd skel(id.rank(), m.cols());
    for (Index i = 0; i < id.rank(); ++i)
        skel.row(i) = m.row(id.skeleton[static_cast<std::size_t>(i)]);
    return id.interpolation_matrix() * skel;
}

} // namespace

TEST_CASE("pivoted QR")
{
    auto qi = qr_column_pivoted(Eigen::MatrixXd::Identity(3, 3));
    CHECK((qi.q * qi.r - Eigen::MatrixXd::Identity(3, 3)).norm() < 1e-15);
    CHECK(qi.r.diagonal().cwiseAbs().isApprox(Eigen::Vector3d::Ones()));

    const Eigen::MatrixXd outer = Eigen::VectorXd::LinSpaced(5, 1, 5) * Eigen::RowVectorXd::LinSpaced(4, 2, 5);
    auto q1 = qr_column_pivoted(outer);
    CHECK(std::abs(q1.r(1, 1)) <= 1e-12 * std::abs(q1.r(0, 0)));

    const Eigen::MatrixXd m = test::random_matrix(30, 10, 1);
    auto q = qr_column_pivoted(m);
    CHECK((permuted(m, q.perm) - q.q * q.r).norm() <= 1e-12 * m.norm());
    CHECK((q.q.transpose() * q.q - Eigen::MatrixXd::Identity(10, 10)).norm() < 1e-13);
    for (Index i = 1; i < 10; ++i)
        CHECK(std::abs(q.r(i, i)) <= std::abs(q.r(i - 1, i - 1)) + 1e-15);
}

TEST_CASE("interpolative decomposition examples")
{
    Eigen::MatrixXd m(2, 1);
    m << 1, 2;
    auto id = interpolative_decomposition(m, 1);
    CHECK(id.skeleton == std::vector<Index>{1});
    CHECK(id.coefficients(0, 0) == doctest::Approx(0.5));

    auto eye = interpolative_decomposition(Eigen::MatrixXd::Identity(4, 4), 4);
    CHECK(eye.rank() == 4);
    CHECK(eye.coefficients.rows() == 0);
    CHECK(eye.interpolation_matrix().cwiseAbs().sum() == 4.0);

    const Eigen::MatrixXd low = test::random_matrix(50, 3, 2) * test::random_matrix(3, 6, 3);
    auto lr = interpolative_decomposition(low, 3);
    CHECK((id_reconstruction(low, lr) - low).norm() <= 1e-10 * low.norm());
    CHECK(max_norm(lr.coefficients) <= 2.0);
    CHECK_THROWS(interpolative_decomposition(low, 7));
    CHECK_THROWS(interpolative_decomposition(low, 3, 1.0));
}

TEST_CASE("interpolative decomposition respects the bound on adversarial input")
{
    // Rows that pivoted QR alone leaves with large coefficients.
    Eigen::MatrixXd m(6, 2);
    m << 1, 0, 0, 1e-3, 1, 1e-3, 1, -1e-3, 0.5, 2e-3, 1, 4e-3;
    for (double s : {1.05, 1.5, 2.0}) {
        auto id = interpolative_decomposition(m, 2, s);
        CHECK(max_norm(id.coefficients) <= s);
        CHECK((id_reconstruction(m, id) - m).norm() <= 1e-12 * m.norm());
    }
}

TEST_CASE("surplus rank gets zero coefficients")
{
    const Eigen::MatrixXd low = test::random_matrix(20, 2, 4) * test::random_matrix(2, 5, 5);
    auto id = interpolative_decomposition(low, 4);
    CHECK(id.rank() == 4);
    CHECK(max_norm(id.coefficients) <= 2.0);
    CHECK((id_reconstruction(low, id) - low).norm() <= 1e-10 * low.norm());
}

TEST_CASE("truncated pseudoinverse")
{
    const Eigen::MatrixXd m = test::random_matrix(6, 6, 6) + 3.0 * Eigen::MatrixXd::Identity(6, 6);
    auto t = truncated_pinv(m, 1e-12);
    CHECK((t.matrix() * m - Eigen::MatrixXd::Identity(6, 6)).norm() <= 1e-10);
    CHECK((t.left * t.right - t.matrix()).norm() <= 1e-12);
    auto exact = truncated_pinv(m, 0.0);
    CHECK((exact.matrix() - m.inverse()).norm() <= 1e-10 * m.inverse().norm());

    auto zero = truncated_pinv(Eigen::MatrixXd::Zero(4, 4), 1e-10);
    CHECK(zero.effective_rank == 0);
    CHECK(zero.matrix().norm() == 0.0);

    const Eigen::MatrixXd sing = test::random_matrix(6, 4, 7) * test::random_matrix(4, 6, 8);
    auto ts = truncated_pinv(sing, 1e-10);
    CHECK(ts.effective_rank == 4);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sing, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXd oracle = svd.matrixV().leftCols(4) *
                                   svd.singularValues().head(4).cwiseInverse().asDiagonal() *
                                   svd.matrixU().leftCols(4).transpose();
    CHECK((ts.matrix() - oracle).norm() <= 1e-8 * oracle.norm());
    CHECK_THROWS(truncated_pinv(sing, -1.0));
}

TEST_CASE("pseudoinverse factors")
{
    const Eigen::MatrixXd sing = test::random_matrix(5, 3, 9) * test::random_matrix(3, 7, 10);
    auto p = pseudo_inverse(sing);
    CHECK(p.rank == 3);
    CHECK((sing * p.matrix() * sing - sing).norm() <= 1e-10 * sing.norm());
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sing);
    CHECK(p.sigma_min == doctest::Approx(svd.singularValues()(2)).epsilon(1e-10));
}

TEST_CASE("svd helpers")
{
    const Eigen::Matrix3d d = Eigen::Vector3d(3, 2, 1).asDiagonal();
    CHECK(best_rank_r_error(d, 1) == doctest::Approx(2.0 / 3.0));
    const Eigen::MatrixXd r2 = test::random_matrix(8, 2, 11) * test::random_matrix(2, 9, 12);
    CHECK(best_rank_r_error(r2, 2) <= 1e-14);

    const Eigen::MatrixXd m = test::random_matrix(40, 60, 13);
    CHECK(spectral_norm(m) == doctest::Approx(test::power_norm(m)).epsilon(1e-6));
    const Eigen::MatrixXd big = test::random_matrix(300, 200, 14);
    CHECK(spectral_norm(big) == doctest::Approx(singular_values(big)(0)).epsilon(1e-12));
    CHECK_THROWS_AS(spectral_norm(big, 100), std::length_error);
    auto s = svd_dense(m);
    CHECK((s.u * s.sigma.asDiagonal() * s.v.transpose() - m).norm() <= 1e-12 * m.norm());
}
