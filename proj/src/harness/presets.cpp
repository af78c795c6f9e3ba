#include <functional>
#include <map>
#include <stdexcept>

#include "geolr/harness.hpp"

namespace geolr::harness {

namespace {

MethodConfig method(const std::string& kind, SelectionMethod sel, const std::string& label = {},
                    double fps_fraction = 0.0)
{
    MethodConfig m;
    m.kind = kind;
    m.label = label;
    m.selector.method = sel;
    m.selector.fps_fraction = fps_fraction;
    return m;
}

std::vector<Index> range(Index first, Index last, Index step)
{
    std::vector<Index> out;
    for (Index r = first; r <= last; r += step)
        out.push_back(r);
    return out;
}

ExperimentConfig exp1()
{
    ExperimentConfig c;
    c.name = "exp1-indicator";
    c.kind = ExperimentKind::RatioStudy;
    c.dataset.synthetic = {SyntheticKind::UniformBoxes, 100, 0, 2, 0.0, 0, 0.0, 11};
    c.dataset.m = 50;
    c.dataset.n = 100;
    c.kernels = {KernelConfig{"log-distance", std::nullopt, std::nullopt, ""}};
    c.ranks = range(4, 24, 2);
    return c;
}

ExperimentConfig exp2()
{
    ExperimentConfig c;
    c.name = "exp2-indicator";
    c.kind = ExperimentKind::RatioStudy;
    c.dataset.synthetic = {SyntheticKind::TwoClusters2D, 400, 0, 2, 0.0, 0, 0.0, 12};
    c.dataset.y_rule = YRule::SameAsX;
    c.kernels = {KernelConfig{"gaussian", 0.3, std::nullopt, ""}};
    c.shared_subset = true;
    c.ranks = range(2, 40, 2);
    return c;
}

ExperimentConfig test1(int which)
{
    static const double shifts[] = {2.7, 2.0, 0.5};
    ExperimentConfig c;
    c.name = "test1-dataset" + std::to_string(which);
    c.dataset.synthetic.kind = SyntheticKind::ShiftedManifold;
    c.dataset.synthetic.n = 1400;
    c.dataset.synthetic.shift = shifts[which - 1];
    c.dataset.synthetic.seed = 1;
    c.kernels = {KernelConfig{"inverse-distance", std::nullopt, std::nullopt, ""}};
    c.methods = {method("one-sided", SelectionMethod::Fps, "dd-fps"), method("aca", SelectionMethod::Fps),
                 method("svd", SelectionMethod::Fps)};
    c.ranks = range(5, 60, 5);
    c.repeats = 3;
    return c;
}

/// High-dimensional UCI sets are read from a local CSV when present and
/// replaced by a clustered Gaussian mixture of the same dimension otherwise.
DatasetConfig uci(Index dim, Index m, Index n, std::uint64_t seed)
{
    DatasetConfig d;
    d.source = "csv";
    d.synthetic.kind = SyntheticKind::GaussianMixture;
    d.synthetic.dim = dim;
    d.synthetic.m = m;
    d.synthetic.n = n;
    d.synthetic.seed = seed;
    d.y_rule = YRule::Split;
    d.standardize = true;
    d.m = m;
    d.n = n;
    d.seed = seed;
    return d;
}

ExperimentConfig test2()
{
    ExperimentConfig c;
    c.name = "test2-selectors";
    c.dataset = uci(128, 1600, 2000, 2);
    c.kernels = {KernelConfig{"gaussian", std::nullopt, 1.0, "gaussian-sigma1"}};
    for (auto [sel, label, frac] : {std::tuple{SelectionMethod::AnchorGrid, "dd2-anc", 0.0},
                                   std::tuple{SelectionMethod::Fps, "dd2-fps", 0.0},
                                   std::tuple{SelectionMethod::Uniform, "dd2-unif", 0.0},
                                   std::tuple{SelectionMethod::Mixed, "dd2-mixed1", 0.05},
                                   std::tuple{SelectionMethod::Mixed, "dd2-mixed2", 0.10},
                                   std::tuple{SelectionMethod::Mixed, "dd2-mixed3", 0.50}}) {
        MethodConfig m = method("two-sided", sel, label, frac);
        m.stabilize = true;
        c.methods.push_back(m);
    }
    c.ranks = range(10, 200, 10);
    c.repeats = 1;
    return c;
}

ExperimentConfig test3()
{
    ExperimentConfig c = test2();
    c.name = "test3-one-vs-two";
    c.methods.clear();
    for (auto [sel, tag] : {std::pair{SelectionMethod::Uniform, "unif"}, std::pair{SelectionMethod::AnchorGrid, "anc"},
                            std::pair{SelectionMethod::Fps, "fps"}}) {
        c.methods.push_back(method("one-sided", sel, std::string("dd1-") + tag));
        MethodConfig two = method("two-sided", sel, std::string("dd2-") + tag);
        two.stabilize = true;
        c.methods.push_back(two);
    }
    return c;
}

ExperimentConfig test4(bool covertype)
{
    ExperimentConfig c;
    c.name = covertype ? "test4-aca-covertype" : "test4-aca-gas";
    c.dataset = covertype ? uci(54, 2000, 2500, 4) : uci(128, 1600, 2000, 2);
    for (auto [frac, label] : {std::pair{1.0, "gaussian-sigma1"}, std::pair{0.5, "gaussian-sigma2"},
                               std::pair{0.25, "gaussian-sigma3"}})
        c.kernels.push_back(KernelConfig{"gaussian", std::nullopt, frac, label});
    c.methods = {method("aca", SelectionMethod::Fps), method("one-sided", SelectionMethod::AnchorGrid, "dd-anc"),
                 method("one-sided", SelectionMethod::Fps, "dd-fps"), method("svd", SelectionMethod::Fps)};
    c.ranks = range(10, 190, 20);
    c.repeats = 3;
    return c;
}

ExperimentConfig test5()
{
    ExperimentConfig c;
    c.name = "test5-scaling";
    c.kind = ExperimentKind::Scaling;
    c.dataset.synthetic.kind = SyntheticKind::UniformBoxes;
    c.dataset.synthetic.seed = 5;
    c.kernels = {KernelConfig{"log-distance", std::nullopt, std::nullopt, ""}};
    c.methods = {method("one-sided", SelectionMethod::Fps, "dd-fps")};
    c.scaling.sizes = {10000, 20000, 40000, 80000};
    c.scaling.dims = {3, 10, 50, 100};
    c.scaling.rank = 30;
    c.estimator_iterations = 10;
    return c;
}

ExperimentConfig test6()
{
    ExperimentConfig c;
    c.name = "test6-kernels";
    c.dataset = uci(561, 1500, 0, 6);
    c.dataset.y_rule = YRule::ShiftedCopy;
    c.dataset.m = 0;
    c.dataset.synthetic.n = 1500;
    for (const char* k : {"table1:k1", "table1:k2", "table1:k3", "table1:k4", "table1:k5", "table1:k6"})
        c.kernels.push_back(KernelConfig{k, std::nullopt, std::nullopt, std::string(k).substr(7)});
    c.methods = {method("aca", SelectionMethod::Fps), method("one-sided", SelectionMethod::Fps, "dd-fps"),
                 method("one-sided", SelectionMethod::AnchorGrid, "dd-anc")};
    c.ranks = {10, 50, 90, 130, 170, 210, 250};
    c.repeats = 1;
    c.references = {ReferenceSpec{"dd-anc/k1", 50, 9.0e-5, 10.0}};
    return c;
}

const std::map<std::string, std::function<ExperimentConfig()>>& registry()
{
    static const std::map<std::string, std::function<ExperimentConfig()>> presets{
        {"exp1-indicator", exp1},
        {"exp2-indicator", exp2},
        {"test1-dataset1", [] { return test1(1); }},
        {"test1-dataset2", [] { return test1(2); }},
        {"test1-dataset3", [] { return test1(3); }},
        {"test2-selectors", test2},
        {"test3-one-vs-two", test3},
        {"test4-aca-covertype", [] { return test4(true); }},
        {"test4-aca-gas", [] { return test4(false); }},
        {"test5-scaling", test5},
        {"test6-kernels", test6},
    };
    return presets;
}

} // namespace

std::vector<std::string> preset_names()
{
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry())
        out.push_back(name);
    return out;
}

ExperimentConfig preset(const std::string& name)
{
    const auto& reg = registry();
    const auto it = reg.find(name);
    if (it == reg.end()) {
        std::string msg = "unknown preset '" + name + "'; available:";
        for (const auto& [n, fn] : reg)
            msg += " " + n;
        throw std::invalid_argument(msg);
    }
    return it->second();
}

} // namespace geolr::harness
