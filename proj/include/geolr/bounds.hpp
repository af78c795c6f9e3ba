#ifndef GEOLR_BOUNDS_HPP
#define GEOLR_BOUNDS_HPP

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geolr/factor.hpp"

namespace geolr {

enum class BoundKind {
    Lemma21,
    Thm22Entrywise,
    Thm23MaxNorm,
    Cor24ColumnProjection,
    Cor24RowProjection,
    Thm25Geometric,
    Thm33OneSided,
    Thm34OneSidedGeometric,
};

const char* to_string(BoundKind k);

/// One verified inequality lhs <= rhs with the scalars that make up rhs.
struct BoundReport
{
    BoundKind kind = BoundKind::Lemma21;
    double lhs = 0.0;
    double rhs = 0.0;
    std::map<std::string, double> terms;
    /// Set when a constituent is unusable (an infinite discrete Lipschitz
    /// constant means coincident points with different kernel values).
    std::optional<std::string> error;

    bool holds(double slack = 1e-9) const
    {
        return !error && lhs <= rhs + slack * (1.0 + std::abs(rhs));
    }
};

nlohmann::json to_json(const BoundReport& r);

inline constexpr Index default_bound_guard = 500;

/// |a_hat^T A b_hat - a^T A b| against ||a^T A|| e2 + ||A b|| e1 + ||A|| e1 e2.
BoundReport lemma21_check(const Eigen::MatrixXd& a, const Eigen::VectorXd& alpha, const Eigen::VectorXd& alpha_hat,
                          const Eigen::VectorXd& beta, const Eigen::VectorXd& beta_hat);

struct LipschitzValue
{
    double value = 0.0;
    bool infinite = false;

    /// Quotient num/den; 0/0 is skipped, nonzero/0 sets the infinite flag.
    void add(double num, double den)
    {
        if (den == 0.0) {
            if (num != 0.0)
                infinite = true;
            return;
        }
        value = std::max(value, num / den);
    }
    double get() const { return infinite ? std::numeric_limits<double>::infinity() : value; }
};

/// L(Z1 x Z2, S1 x S2): max |k(x,y) - k(u,v)| / sqrt(|x-u|^2 + |y-v|^2).
template <typename Kernel>
LipschitzValue lipschitz_joint(const Kernel& kappa, const PointSet& z1, const PointSet& z2, const PointSet& s1,
                               const PointSet& s2)
{
    LipschitzValue l;
    for (Index x = 0; x < z1.size(); ++x)
        for (Index y = 0; y < z2.size(); ++y) {
            const double kxy = kappa(z1.point(x), z2.point(y));
            for (Index u = 0; u < s1.size(); ++u) {
                const double dx = squared_distance(z1.point(x), s1.point(u));
                for (Index v = 0; v < s2.size(); ++v)
                    l.add(std::abs(kxy - kappa(s1.point(u), s2.point(v))),
                          std::sqrt(dx + squared_distance(z2.point(y), s2.point(v))));
            }
        }
    return l;
}

/// L(Z2, S2)_{W1}: max over x in W1, y in Z2, v in S2 of |k(x,y) - k(x,v)| / |y-v|.
template <typename Kernel>
LipschitzValue lipschitz_fixed_row(const Kernel& kappa, const PointSet& w1, const PointSet& z2, const PointSet& s2)
{
    LipschitzValue l;
    for (Index x = 0; x < w1.size(); ++x)
        for (Index y = 0; y < z2.size(); ++y)
            for (Index v = 0; v < s2.size(); ++v)
                l.add(std::abs(kappa(w1.point(x), z2.point(y)) - kappa(w1.point(x), s2.point(v))),
                      distance(z2.point(y), s2.point(v)));
    return l;
}

/// L(Z1, S1)_{W2}: max over y in W2, x in Z1, u in S1 of |k(x,y) - k(u,y)| / |x-u|.
template <typename Kernel>
LipschitzValue lipschitz_fixed_col(const Kernel& kappa, const PointSet& z1, const PointSet& s1, const PointSet& w2)
{
    LipschitzValue l;
    for (Index y = 0; y < w2.size(); ++y)
        for (Index x = 0; x < z1.size(); ++x)
            for (Index u = 0; u < s1.size(); ++u)
                l.add(std::abs(kappa(z1.point(x), w2.point(y)) - kappa(s1.point(u), w2.point(y))),
                      distance(z1.point(x), s1.point(u)));
    return l;
}

/// Builds the unstabilized two-sided factorization from S1, S2 and checks
/// Lemma21 (at the worst entry), Thm22Entrywise, Thm23MaxNorm, both
/// projection estimates and Thm25Geometric against it. Throws
/// std::length_error when m or n exceeds `guard`.
std::vector<BoundReport> check_two_sided(const KernelMatrix& k, const SubsetSelection& s1, const SubsetSelection& s2,
                                         Index guard = default_bound_guard);

/// Takes an ID of K_{XS} at rank |S| (so U K_{IS} = K_{XS}) with coefficient
/// bound `id_bound` and checks Thm33OneSided and Thm34OneSidedGeometric, with
/// the factor 2r read as id_bound * r.
std::vector<BoundReport> check_one_sided(const KernelMatrix& k, const SubsetSelection& s, double id_bound = 2.0,
                                         Index guard = default_bound_guard);

} // namespace geolr

#endif // GEOLR_BOUNDS_HPP
