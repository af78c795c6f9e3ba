#ifndef GEOLR_INDICATORS_HPP
#define GEOLR_INDICATORS_HPP

#include <array>
#include <bitset>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "geolr/factor.hpp"

namespace geolr {

/// Indicators 1..5 are stored at positions 0..4.
using IndicatorSet = std::bitset<5>;
inline const IndicatorSet all_indicators{0b11111};

/// Subset quality indicators for a pair (S1, S2):
///   1  max_{x,y} min_{u,v} |k(x,y) - k(u,v)|
///   2  max_x min_u ||K_{xS2} - K_{uS2}||
///   3  delta_{X,S1}
///   4  delta_{Y,S2}
///   5  ||K_{S1S2}^+|| = 1 / sigma_min
struct IndicatorReport
{
    std::array<std::optional<double>, 5> values;
    /// Operation counts actually spent per indicator (kernel evaluations and
    /// distance or difference computations).
    std::array<double, 5> costs{};
    std::vector<Index> s1;
    std::vector<Index> s2;

    /// 1-based access.
    std::optional<double> indicator(int k) const { return values.at(static_cast<std::size_t>(k - 1)); }
};

/// Indicator 1 evaluates all m*n entries; it throws std::length_error when
/// m*n exceeds `ind1_guard`.
IndicatorReport compute_indicators(const KernelMatrix& k, const SubsetSelection& s1, const SubsetSelection& s2,
                                   IndicatorSet which = all_indicators, double ind1_guard = 1e6);

enum class Prediction { ABetter, BBetter, Tie, Undefined };

/// ratio > 1 predicts A, ratio < 1 predicts B.
Prediction predict(std::optional<double> ratio);
char to_char(Prediction p);

struct SubsetChoice
{
    SubsetSelection s1;
    SubsetSelection s2;
};

/// Ratios B / A per indicator and for the max-norm error of the unstabilized
/// two-sided approximation. A zero denominator leaves the ratio undefined.
struct RatioRow
{
    Index rank = 0;
    std::array<std::optional<double>, 5> ratios;
    std::optional<double> error_ratio;
    std::array<Prediction, 5> predictions{};
    double error_a = 0.0;
    double error_b = 0.0;
    std::uint64_t seed_a = 0;
};

RatioRow compare_choice_pair(const KernelMatrix& k, const SubsetChoice& a, const SubsetChoice& b,
                             IndicatorSet which = all_indicators);

std::vector<RatioRow> compare_choices(const KernelMatrix& k, const std::function<SubsetChoice(Index)>& choice_a,
                                      const std::function<SubsetChoice(Index)>& choice_b,
                                      const std::vector<Index>& ranks, IndicatorSet which = all_indicators);

struct RatioStudyOptions
{
    std::vector<Index> ranks;
    std::uint64_t seed = 0;
    /// S1 = S2 = S, drawn once from X (requires X and Y to be the same set).
    bool shared_subset = false;
    IndicatorSet which = all_indicators;
};

/// A = fresh uniform subsets per rank (seed + rank, recorded in seed_a),
/// B = the first r FPS points of each set.
std::vector<RatioRow> random_vs_fps(const KernelMatrix& k, const RatioStudyOptions& options);

/// CSV with columns rank,ratio_ind1..ratio_ind5,ratio_error,predictions. Undefined
/// ratios are empty fields; predictions is one character per indicator
/// (A, B, = for a tie, ? when undefined).
void write_ratio_csv(std::ostream& os, const std::vector<RatioRow>& rows);

} // namespace geolr

#endif // GEOLR_INDICATORS_HPP
