// geolr command line: single factorizations, preset experiments, indicator
// studies and bound verification.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "geolr/bounds.hpp"
#include "geolr/harness.hpp"

using namespace geolr;
namespace h = geolr::harness;

namespace {

struct CompressArgs
{
    std::string kernel = "gaussian";
    double param = 0.0;
    double sigma_fraction = 1.0;
    std::string method = "one-sided";
    std::string selector = "fps";
    Index rank = 10;
    double oversample = 2.0;
    bool stabilize = false;
    bool no_stabilize = false;
    std::uint64_t seed = 0;
    std::string x_csv;
    std::string y_csv;
    std::string synthetic = "uniform-boxes";
    Index n = 1000;
    Index dim = 3;
    double shift = 2.7;
    std::string out_json;
};

int run_compress(const CompressArgs& a)
{
    h::DatasetConfig d;
    PointSet x, y;
    if (!a.x_csv.empty()) {
        x = read_csv(a.x_csv);
        y = a.y_csv.empty() ? x : read_csv(a.y_csv);
    } else {
        SyntheticSpec s;
        s.kind = parse_synthetic_kind(a.synthetic);
        s.n = a.n;
        s.dim = a.dim;
        s.shift = a.shift;
        s.seed = a.seed;
        std::tie(x, y) = generate_synthetic(s);
    }
    const bool same = !a.x_csv.empty() && a.y_csv.empty();
    const PointSet& cols = same || a.method == "symmetric" ? x : y;

    h::KernelConfig kc;
    kc.name = a.kernel;
    if (a.param > 0.0)
        kc.param = a.param;
    kc.sigma_fraction = a.sigma_fraction;
    const KernelSpec spec = h::resolve_kernel(kc, x, cols, a.seed);
    const KernelMatrix km(spec, x, cols);

    SelectorConfig sel;
    sel.method = parse_selection_method(a.selector);
    sel.seed = a.seed;

    const auto t0 = std::chrono::steady_clock::now();
    LowRankFactorization f;
    if (a.method == "one-sided") {
        f = one_sided(km, OneSidedOptions{SampleSide::SampleY, a.rank, a.oversample, sel, 2.0});
    } else if (a.method == "two-sided") {
        SelectorConfig c = sel;
        c.sample_count = a.rank;
        const bool stab = a.stabilize || (!a.no_stabilize && sel.method == SelectionMethod::Uniform);
        f = two_sided(km, select(x, c), select(cols, c), TwoSidedOptions{stab, 1e-10});
    } else if (a.method == "symmetric") {
        f = symmetric(km, SymmetricOptions{a.rank, a.oversample, sel, 2.0});
    } else if (a.method == "aca") {
        f = aca(km, AcaOptions{a.rank, AcaStart::FarthestFromCentroid, 0});
    } else {
        throw std::invalid_argument("unknown method '" + a.method + "'");
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    nlohmann::json j{{"kernel", spec.name()},
                     {"method", to_string(f.method)},
                     {"m", km.rows()},
                     {"n", km.cols()},
                     {"rank", f.rank()},
                     {"seconds", secs},
                     {"stopped_early", f.stopped_early}};
    if (static_cast<double>(km.rows()) * static_cast<double>(km.cols()) <= 2.5e7) {
        const auto e = evaluate_errors(f, km.dense());
        j["rel2"] = e.rel2;
        j["maxnorm"] = e.max_abs;
    } else {
        j["rel2_estimate"] = estimate_rel2_error(f, km, a.seed);
    }
    const std::string text = j.dump(2) + "\n";
    if (!a.out_json.empty())
        h::write_atomic(a.out_json, text);
    std::cout << text;
    return 0;
}

struct ExperimentArgs
{
    std::string preset;
    std::string config;
    std::string data;
    std::string out_csv;
    std::string out_json;
    int repeats = 0;
};

h::ExperimentConfig resolve_config(const ExperimentArgs& a)
{
    if (a.preset.empty() == a.config.empty())
        throw std::invalid_argument("give exactly one of --preset or --config");
    h::ExperimentConfig cfg = a.preset.empty() ? h::load_config(a.config) : h::preset(a.preset);
    if (!a.data.empty()) {
        cfg.dataset.source = "csv";
        cfg.dataset.csv_path = a.data;
    }
    if (!a.out_csv.empty())
        cfg.output_csv = a.out_csv;
    if (!a.out_json.empty())
        cfg.output_json = a.out_json;
    if (a.repeats > 0)
        cfg.repeats = a.repeats;
    return cfg;
}

int report(const h::ExperimentConfig& cfg, const h::ExperimentResult& res)
{
    if (cfg.output_csv.empty()) {
        if (cfg.kind == h::ExperimentKind::RatioStudy)
            write_ratio_csv(std::cout, res.ratios);
        else
            h::write_csv(std::cout, res.rows);
    }
    for (const auto& n : res.notes)
        std::cerr << "note: " << n << '\n';
    int status = 0;
    for (const auto& c : res.checks) {
        std::cerr << "reference " << c.name << ": ";
        if (c.skipped) {
            std::cerr << "skipped (real dataset not supplied)\n";
            continue;
        }
        std::cerr << (c.passed ? "pass" : "FAIL") << " observed " << *c.observed << " expected " << c.expected
                  << '\n';
        if (!c.passed)
            status = 1;
    }
    return status;
}

int run_bounds(const std::string& check, Index guard, std::uint64_t seed, int instances, Index size)
{
    if (check != "all")
        throw std::invalid_argument("only --check all is supported");
    nlohmann::json out = nlohmann::json::array();
    int failures = 0;
    for (int i = 0; i < instances; ++i) {
        const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
        SyntheticSpec spec;
        spec.kind = SyntheticKind::UniformBoxes;
        spec.n = size;
        spec.dim = 2;
        spec.seed = s;
        const auto [x, y] = generate_synthetic(spec);
        const bool gaussian = i % 2 == 0;
        const KernelSpec kernel = gaussian ? KernelSpec::gaussian(1.5) : KernelSpec::of(KernelType::LogDistance);
        const KernelMatrix km(kernel, x, y);
        const Index r = 3 + static_cast<Index>(i % 6);
        const bool fps = (i / 2) % 2 == 0;
        const auto s1 = fps ? fps_select(x, r) : uniform_select(x, r, s);
        const auto s2 = fps ? fps_select(y, r) : uniform_select(y, r, s + 1000);
        auto reports = check_two_sided(km, s1, s2, guard);
        for (auto& rep : check_one_sided(km, s2, 2.0, guard))
            reports.push_back(rep);
        for (const auto& rep : reports) {
            auto j = to_json(rep);
            j["instance"] = i;
            j["kernel"] = kernel.name();
            j["selector"] = fps ? "fps" : "uniform";
            out.push_back(j);
            if (!rep.holds()) {
                ++failures;
                std::cerr << "violated: " << to_string(rep.kind) << " instance " << i << " lhs " << rep.lhs
                          << " rhs " << rep.rhs << '\n';
            }
        }
    }
    std::cout << out.dump(2) << '\n';
    std::cerr << (failures == 0 ? "all bounds hold\n" : std::to_string(failures) + " bound violations\n");
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Low-rank compression of kernel matrices by geometric subset selection"};
    app.require_subcommand(1);

    CompressArgs ca;
    auto* compress = app.add_subcommand("compress", "Build one factorization and report its error");
    compress->add_option("--kernel", ca.kernel, "Kernel name (gaussian, inverse-distance, table1:k1, ...)");
    compress->add_option("--param", ca.param, "Kernel parameter; derived from the data when omitted");
    compress->add_option("--sigma-fraction", ca.sigma_fraction, "Gaussian sigma as a fraction of radius(X)");
    compress->add_option("--method", ca.method, "one-sided, two-sided, symmetric or aca");
    compress->add_option("--selector", ca.selector, "fps, uniform, mixed or anchor-grid");
    compress->add_option("--rank", ca.rank, "Target rank");
    compress->add_option("--oversample", ca.oversample, "Sample size factor for one-sided and symmetric");
    compress->add_flag("--stabilize", ca.stabilize, "Force the truncated-QR core for two-sided");
    compress->add_flag("--no-stabilize", ca.no_stabilize, "Disable the truncated-QR core for two-sided");
    compress->add_option("--seed", ca.seed, "Seed for data generation and selection");
    compress->add_option("--x", ca.x_csv, "CSV file with the row points");
    compress->add_option("--y", ca.y_csv, "CSV file with the column points (defaults to X)");
    compress->add_option("--synthetic", ca.synthetic, "Synthetic dataset when no CSV is given");
    compress->add_option("--n", ca.n, "Points per synthetic set");
    compress->add_option("--dim", ca.dim, "Synthetic dimension");
    compress->add_option("--shift", ca.shift, "Vertical shift for shifted-manifold");
    compress->add_option("--out-json", ca.out_json, "Also write the report here");

    ExperimentArgs ea;
    auto* experiment = app.add_subcommand("experiment", "Run a preset or a config file");
    experiment->add_option("--preset", ea.preset, "Preset name (see 'presets')");
    experiment->add_option("--config", ea.config, "JSON config file");
    experiment->add_option("--data", ea.data, "Local CSV replacing the synthetic analogue");
    experiment->add_option("--out-csv", ea.out_csv, "Result CSV path");
    experiment->add_option("--out-json", ea.out_json, "Result JSON path");
    experiment->add_option("--repeats", ea.repeats, "Timing repeats per point");

    ExperimentArgs ia;
    auto* indicators = app.add_subcommand("indicators", "Indicator ratio study");
    indicators->add_option("--preset", ia.preset, "exp1-indicator or exp2-indicator")->required();
    indicators->add_option("--out-csv", ia.out_csv, "Ratio table CSV path");
    indicators->add_option("--out-json", ia.out_json, "JSON path");

    std::string check = "all";
    Index guard = default_bound_guard;
    std::uint64_t bseed = 0;
    int instances = 10;
    Index bsize = 60;
    auto* bounds = app.add_subcommand("bounds", "Verify the error bounds on generated instances");
    bounds->add_option("--check", check, "Which bounds (all)");
    bounds->add_option("--size-guard", guard, "Largest m or n accepted by the exhaustive checks");
    bounds->add_option("--seed", bseed, "First instance seed");
    bounds->add_option("--instances", instances, "Number of instances");
    bounds->add_option("--size", bsize, "Points per set");

    auto* presets = app.add_subcommand("presets", "List preset names");

    CLI11_PARSE(app, argc, argv);
    try {
        if (*compress)
            return run_compress(ca);
        if (*experiment) {
            const auto cfg = resolve_config(ea);
            return report(cfg, h::run_experiment(cfg));
        }
        if (*indicators) {
            auto cfg = resolve_config(ia);
            if (cfg.kind != h::ExperimentKind::RatioStudy)
                throw std::invalid_argument("preset '" + ia.preset + "' is not an indicator study");
            return report(cfg, h::run_experiment(cfg));
        }
        if (*bounds)
            return run_bounds(check, guard, bseed, instances, bsize);
        if (*presets) {
            for (const auto& n : h::preset_names())
                std::cout << n << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
