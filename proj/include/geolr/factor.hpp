#ifndef GEOLR_FACTOR_HPP
#define GEOLR_FACTOR_HPP

#include <optional>
#include <string>
#include <vector>

#include "geolr/kernels.hpp"
#include "geolr/linalg.hpp"
#include "geolr/selectors.hpp"

namespace geolr {

enum class FactorMethod { TwoSided, OneSided, Symmetric, Aca };

const char* to_string(FactorMethod m);

struct StabilizationRecord
{
    double epsilon = 0.0;
    Index effective_rank = 0;
};

/// K ~ left * core * right, with `core` empty (treated as identity) for all
/// methods except Symmetric, where it holds K_{II}.
struct LowRankFactorization
{
    Eigen::MatrixXd left;   ///< m x r
    Eigen::MatrixXd core;   ///< r x r or empty
    Eigen::MatrixXd right;  ///< r x n
    FactorMethod method = FactorMethod::TwoSided;

    std::vector<Index> row_sample;  ///< S1, indices into X
    std::vector<Index> col_sample;  ///< S2, indices into Y
    std::vector<Index> skeleton;    ///< ID skeleton (rows of X, or columns of Y for SampleX)
    std::optional<StabilizationRecord> stabilization;
    /// ACA met a zero pivot before reaching the requested rank.
    bool stopped_early = false;

    Index rows() const { return left.rows(); }
    Index cols() const { return right.cols(); }
    Index rank() const { return left.cols(); }

    Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
    Eigen::VectorXd apply_transpose(const Eigen::VectorXd& v) const;
    /// Dense reconstruction; exactly symmetric for the Symmetric method.
    Eigen::MatrixXd dense() const;
};

struct TwoSidedOptions
{
    bool stabilize = false;
    double epsilon = 1e-10;
};

/// K_{XS2} K_{S1S2}^+ K_{S1Y}, or (K_{XS2} R_eps^+)(Q^T K_{S1Y}) when stabilized.
/// Only the three blocks are evaluated.
LowRankFactorization two_sided(const KernelMatrix& k, const SubsetSelection& s1, const SubsetSelection& s2,
                               const TwoSidedOptions& options = {});

enum class SampleSide { SampleY, SampleX };

struct OneSidedOptions
{
    SampleSide side = SampleSide::SampleY;
    Index rank = 1;
    double oversample = 2.0;
    SelectorConfig selector{};
    double id_bound = 2.0;
};

/// Samples min(ceil(oversample * rank), n) columns S2 of K, takes a rank-r ID of
/// K_{XS2} and returns U K_{IY}. SampleX applies the same to K^T and returns
/// K_{X I2} V^T.
LowRankFactorization one_sided(const KernelMatrix& k, const OneSidedOptions& options);

/// One-sided factorization from an explicit sample (indices into Y, or into X for SampleX).
LowRankFactorization one_sided_from_sample(const KernelMatrix& k, SampleSide side, const SubsetSelection& sample,
                                           Index rank, double id_bound = 2.0);

struct SymmetricOptions
{
    Index rank = 1;
    double oversample = 2.0;
    SelectorConfig selector{};
    double id_bound = 2.0;
};

/// U K_{II} U^T for K_{XX} with a symmetric kernel.
LowRankFactorization symmetric(const KernelMatrix& k, const SymmetricOptions& options);
LowRankFactorization symmetric_from_sample(const KernelMatrix& k, const SubsetSelection& sample, Index rank,
                                           double id_bound = 2.0);

enum class AcaStart { FarthestFromCentroid, Explicit };

struct AcaOptions
{
    Index rank = 1;
    AcaStart start = AcaStart::FarthestFromCentroid;
    Index start_row = 0; ///< used with AcaStart::Explicit
};

/// Partially pivoted adaptive cross approximation with fixed rank. Entries are
/// evaluated one row and one column per step; the residual is never formed.
/// The first row is the one whose point lies farthest from the centroid of Y
/// unless an explicit start row is given.
LowRankFactorization aca(const KernelMatrix& k, const AcaOptions& options);

enum class ErrorNorm { Rel2, MaxNorm };

/// Rel2 = ||K - F||_2 / ||K||_2, MaxNorm = max |K - F| (absolute). Dense; throws
/// std::length_error beyond `guard` rows or columns.
double evaluate_error(const LowRankFactorization& f, const KernelMatrix& k, ErrorNorm norm,
                      Index guard = default_dense_guard);

/// Both norms from one dense evaluation of K.
struct ErrorPair
{
    double rel2 = 0.0;
    double max_abs = 0.0;
};
ErrorPair evaluate_errors(const LowRankFactorization& f, const Eigen::MatrixXd& dense_k);

/// Seeded power-iteration estimate of ||K - F||_2 / ||K||_2 that streams K in
/// row blocks, for matrices too large to hold densely.
double estimate_rel2_error(const LowRankFactorization& f, const KernelMatrix& k, std::uint64_t seed,
                           int iterations = 30, Index block_rows = 256);

} // namespace geolr

#endif // GEOLR_FACTOR_HPP
