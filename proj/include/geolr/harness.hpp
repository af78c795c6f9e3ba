#ifndef GEOLR_HARNESS_HPP
#define GEOLR_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geolr/factor.hpp"
#include "geolr/indicators.hpp"

namespace geolr::harness {

inline constexpr int schema_version = 1;

/// How Y is obtained from the loaded data.
enum class YRule {
    Generated,   ///< synthetic generators produce X and Y together
    Split,       ///< m + n points drawn without replacement, first m form X, the rest Y
    SameAsX,     ///< Y = X (symmetric experiments)
    ShiftedCopy, ///< Y = X + 2R / sqrt(d) in every coordinate, R = max |x|
};

struct DatasetConfig
{
    /// "synthetic" or "csv". A csv source whose file is missing falls back to
    /// `synthetic` and tags rows "synthetic-substitute".
    std::string source = "synthetic";
    std::string csv_path;
    SyntheticSpec synthetic{};
    YRule y_rule = YRule::Generated;
    bool standardize = false;
    Index m = 0; ///< 0 keeps every point
    Index n = 0;
    std::uint64_t seed = 0;
};

struct KernelConfig
{
    std::string name = "gaussian";
    std::optional<double> param;          ///< explicit parameter
    std::optional<double> sigma_fraction; ///< Gaussian sigma as a fraction of radius(X)
    std::string label;                    ///< defaults to name
};

struct MethodConfig
{
    /// one-sided | two-sided | symmetric | aca | svd
    std::string kind = "one-sided";
    std::string label;
    SelectorConfig selector{};
    /// Two-sided only. Defaults to on for uniform selection, off otherwise.
    std::optional<bool> stabilize;
    double epsilon = 1e-10;
    double oversample = 2.0;
    SampleSide side = SampleSide::SampleY;
};

enum class ExperimentKind {
    Sweep,      ///< methods x kernels x ranks on one dataset
    RatioStudy, ///< random vs FPS indicator ratios
    Scaling,    ///< one-sided timing over a grid of sizes and dimensions
};

struct ScalingConfig
{
    std::vector<Index> sizes;
    std::vector<Index> dims;
    Index rank = 30;
    /// Rel2 is estimated only up to this n; larger runs report timing only.
    Index error_size_limit = 10000;
};

/// Published value to compare against when the real dataset is supplied.
struct ReferenceSpec
{
    std::string method; ///< full row label, "<method>/<kernel>"
    Index rank = 0;
    double expected = 0.0;
    double factor = 10.0; ///< pass when observed is within this factor of expected
};

struct ExperimentConfig
{
    std::string name;
    ExperimentKind kind = ExperimentKind::Sweep;
    DatasetConfig dataset{};
    std::vector<KernelConfig> kernels;
    std::vector<MethodConfig> methods;
    std::vector<Index> ranks;
    bool rel2 = true;
    bool maxnorm = false;
    int repeats = 10;
    /// Dense error evaluation up to this many entries; beyond it Rel2 comes
    /// from the streaming estimator and MaxNorm is not computed.
    double dense_entries_guard = 2.5e7;
    int estimator_iterations = 30;
    ScalingConfig scaling{};
    bool shared_subset = false; ///< RatioStudy: S1 = S2
    std::vector<ReferenceSpec> references;
    std::string output_csv;
    std::string output_json;
};

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Throws std::invalid_argument on a schema mismatch or a malformed field.
ExperimentConfig config_from_json(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);
/// Ranks strictly increasing, methods and kernels known, repeats >= 1.
void validate(const ExperimentConfig& cfg);

/// FNV-1a 64 of the canonical JSON form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

std::vector<std::string> preset_names();
/// Throws std::invalid_argument listing the presets for an unknown name.
ExperimentConfig preset(const std::string& name);

struct ResultRow
{
    std::string method; ///< "<method label>/<kernel label>"
    Index rank = 0;
    std::optional<double> rel2;
    std::optional<double> maxnorm;
    double wall_time_s = 0.0;
    std::optional<std::int64_t> peak_memory_bytes;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string tag;

    bool operator==(const ResultRow&) const = default;
};

struct ReferenceCheck
{
    std::string name;
    double expected = 0.0;
    std::optional<double> observed;
    bool skipped = true;
    bool passed = false;
};

struct ExperimentResult
{
    std::vector<ResultRow> rows;
    std::vector<RatioRow> ratios; ///< RatioStudy only
    std::vector<ReferenceCheck> checks;
    std::vector<std::string> notes;
};

/// Runs the experiment, sorts rows by (method, rank) and writes the outputs
/// named in the config (CSV and JSON, each via a temporary file and rename).
ExperimentResult run_experiment(const ExperimentConfig& cfg);

struct LoadedData
{
    PointSet x;
    PointSet y;
    bool y_is_x = false; ///< use x for both sides so that K_XX is recognised as symmetric
    bool substitute = false;

    const PointSet& cols() const { return y_is_x ? x : y; }
};
LoadedData load_dataset(const DatasetConfig& cfg);
KernelSpec resolve_kernel(const KernelConfig& k, const PointSet& x, const PointSet& y, std::uint64_t seed);

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_csv_rows(const std::string& text);
nlohmann::json rows_to_json(const std::vector<ResultRow>& rows);
/// Writes `content` to `path` through `path.tmp` and a rename.
void write_atomic(const std::string& path, const std::string& content);

/// Peak resident set size of this process, when the OS reports it.
std::optional<std::int64_t> peak_memory_bytes();

} // namespace geolr::harness

#endif // GEOLR_HARNESS_HPP
