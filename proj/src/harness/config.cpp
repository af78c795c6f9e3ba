#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "geolr/harness.hpp"

namespace geolr::harness {

using nlohmann::json;

namespace {

const char* to_string(YRule r)
{
    switch (r) {
    case YRule::Generated: return "generated";
    case YRule::Split: return "split";
    case YRule::SameAsX: return "same-as-x";
    case YRule::ShiftedCopy: return "shifted-copy";
    }
    return "?";
}

YRule parse_y_rule(const std::string& s)
{
    if (s == "generated") return YRule::Generated;
    if (s == "split") return YRule::Split;
    if (s == "same-as-x") return YRule::SameAsX;
    if (s == "shifted-copy") return YRule::ShiftedCopy;
    throw std::invalid_argument("unknown y_rule '" + s + "'");
}

const char* to_string(ExperimentKind k)
{
    switch (k) {
    case ExperimentKind::Sweep: return "sweep";
    case ExperimentKind::RatioStudy: return "ratio-study";
    case ExperimentKind::Scaling: return "scaling";
    }
    return "?";
}

ExperimentKind parse_kind(const std::string& s)
{
    if (s == "sweep") return ExperimentKind::Sweep;
    if (s == "ratio-study") return ExperimentKind::RatioStudy;
    if (s == "scaling") return ExperimentKind::Scaling;
    throw std::invalid_argument("unknown experiment kind '" + s + "'");
}

std::string method_name(SelectionMethod m)
{
    switch (m) {
    case SelectionMethod::Fps: return "fps";
    case SelectionMethod::Uniform: return "uniform";
    case SelectionMethod::Mixed: return "mixed";
    case SelectionMethod::AnchorGrid: return "anchor-grid";
    case SelectionMethod::Explicit: return "explicit";
    }
    return "?";
}

json selector_json(const SelectorConfig& s)
{
    return json{{"method", method_name(s.method)},
                {"fps_fraction", s.fps_fraction},
                {"seed", s.seed},
                {"fps_start", geolr::to_string(s.fps_start)}};
}

SelectorConfig selector_from(const json& j)
{
    SelectorConfig s;
    s.method = parse_selection_method(j.value("method", std::string("fps")));
    s.fps_fraction = j.value("fps_fraction", s.fps_fraction);
    s.seed = j.value("seed", s.seed);
    s.fps_start = parse_fps_start(j.value("fps_start", std::string(geolr::to_string(s.fps_start))));
    return s;
}

json synthetic_json(const SyntheticSpec& s)
{
    return json{{"kind", geolr::to_string(s.kind)}, {"n", s.n},           {"m", s.m},
                {"dim", s.dim},                     {"shift", s.shift},   {"clusters", s.clusters},
                {"spread", s.spread},               {"seed", s.seed}};
}

SyntheticSpec synthetic_from(const json& j)
{
    SyntheticSpec s;
    s.kind = parse_synthetic_kind(j.value("kind", std::string(geolr::to_string(s.kind))));
    s.n = j.value("n", s.n);
    s.m = j.value("m", s.m);
    s.dim = j.value("dim", s.dim);
    s.shift = j.value("shift", s.shift);
    s.clusters = j.value("clusters", s.clusters);
    s.spread = j.value("spread", s.spread);
    s.seed = j.value("seed", s.seed);
    return s;
}

} // namespace

json to_json(const ExperimentConfig& cfg)
{
    json j;
    j["schema_version"] = schema_version;
    j["name"] = cfg.name;
    j["kind"] = to_string(cfg.kind);
    const auto& d = cfg.dataset;
    j["dataset"] = json{{"source", d.source},
                        {"csv_path", d.csv_path},
                        {"synthetic", synthetic_json(d.synthetic)},
                        {"y_rule", to_string(d.y_rule)},
                        {"standardize", d.standardize},
                        {"m", d.m},
                        {"n", d.n},
                        {"seed", d.seed}};
    j["kernels"] = json::array();
    for (const auto& k : cfg.kernels) {
        json kj{{"name", k.name}, {"label", k.label}};
        if (k.param)
            kj["param"] = *k.param;
        if (k.sigma_fraction)
            kj["sigma_fraction"] = *k.sigma_fraction;
        j["kernels"].push_back(kj);
    }
    j["methods"] = json::array();
    for (const auto& m : cfg.methods) {
        json mj{{"kind", m.kind},
                {"label", m.label},
                {"selector", selector_json(m.selector)},
                {"epsilon", m.epsilon},
                {"oversample", m.oversample},
                {"side", m.side == SampleSide::SampleY ? "sample-y" : "sample-x"}};
        if (m.stabilize)
            mj["stabilize"] = *m.stabilize;
        j["methods"].push_back(mj);
    }
    j["ranks"] = cfg.ranks;
    j["errors"] = json{{"rel2", cfg.rel2}, {"maxnorm", cfg.maxnorm}};
    j["repeats"] = cfg.repeats;
    j["dense_entries_guard"] = cfg.dense_entries_guard;
    j["estimator_iterations"] = cfg.estimator_iterations;
    j["scaling"] = json{{"sizes", cfg.scaling.sizes},
                        {"dims", cfg.scaling.dims},
                        {"rank", cfg.scaling.rank},
                        {"error_size_limit", cfg.scaling.error_size_limit}};
    j["shared_subset"] = cfg.shared_subset;
    j["references"] = json::array();
    for (const auto& r : cfg.references)
        j["references"].push_back(
            json{{"method", r.method}, {"rank", r.rank}, {"expected", r.expected}, {"factor", r.factor}});
    j["output"] = json{{"csv", cfg.output_csv}, {"json", cfg.output_json}};
    return j;
}

ExperimentConfig config_from_json(const json& j)
{
    if (!j.is_object())
        throw std::invalid_argument("config must be a JSON object");
    if (!j.contains("schema_version") || j["schema_version"] != schema_version)
        throw std::invalid_argument("config schema_version must be " + std::to_string(schema_version));
    try {
        ExperimentConfig cfg;
        cfg.name = j.value("name", std::string());
        cfg.kind = parse_kind(j.value("kind", std::string("sweep")));
        if (j.contains("dataset")) {
            const auto& d = j["dataset"];
            cfg.dataset.source = d.value("source", cfg.dataset.source);
            cfg.dataset.csv_path = d.value("csv_path", std::string());
            if (d.contains("synthetic"))
                cfg.dataset.synthetic = synthetic_from(d["synthetic"]);
            cfg.dataset.y_rule = parse_y_rule(d.value("y_rule", std::string("generated")));
            cfg.dataset.standardize = d.value("standardize", false);
            cfg.dataset.m = d.value("m", Index{0});
            cfg.dataset.n = d.value("n", Index{0});
            cfg.dataset.seed = d.value("seed", std::uint64_t{0});
        }
        for (const auto& kj : j.value("kernels", json::array())) {
            KernelConfig k;
            k.name = kj.at("name").get<std::string>();
            k.label = kj.value("label", std::string());
            if (kj.contains("param"))
                k.param = kj["param"].get<double>();
            if (kj.contains("sigma_fraction"))
                k.sigma_fraction = kj["sigma_fraction"].get<double>();
            cfg.kernels.push_back(k);
        }
        for (const auto& mj : j.value("methods", json::array())) {
            MethodConfig m;
            m.kind = mj.at("kind").get<std::string>();
            m.label = mj.value("label", std::string());
            if (mj.contains("selector"))
                m.selector = selector_from(mj["selector"]);
            if (mj.contains("stabilize"))
                m.stabilize = mj["stabilize"].get<bool>();
            m.epsilon = mj.value("epsilon", m.epsilon);
            m.oversample = mj.value("oversample", m.oversample);
            const std::string side = mj.value("side", std::string("sample-y"));
            if (side != "sample-y" && side != "sample-x")
                throw std::invalid_argument("method side must be sample-y or sample-x");
            m.side = side == "sample-y" ? SampleSide::SampleY : SampleSide::SampleX;
            cfg.methods.push_back(m);
        }
        cfg.ranks = j.value("ranks", std::vector<Index>{});
        if (j.contains("errors")) {
            cfg.rel2 = j["errors"].value("rel2", true);
            cfg.maxnorm = j["errors"].value("maxnorm", false);
        }
        cfg.repeats = j.value("repeats", cfg.repeats);
        cfg.dense_entries_guard = j.value("dense_entries_guard", cfg.dense_entries_guard);
        cfg.estimator_iterations = j.value("estimator_iterations", cfg.estimator_iterations);
        if (j.contains("scaling")) {
            cfg.scaling.sizes = j["scaling"].value("sizes", std::vector<Index>{});
            cfg.scaling.dims = j["scaling"].value("dims", std::vector<Index>{});
            cfg.scaling.rank = j["scaling"].value("rank", cfg.scaling.rank);
            cfg.scaling.error_size_limit = j["scaling"].value("error_size_limit", cfg.scaling.error_size_limit);
        }
        cfg.shared_subset = j.value("shared_subset", false);
        for (const auto& rj : j.value("references", json::array())) {
            ReferenceSpec r;
            r.method = rj.at("method").get<std::string>();
            r.rank = rj.at("rank").get<Index>();
            r.expected = rj.at("expected").get<double>();
            r.factor = rj.value("factor", r.factor);
            cfg.references.push_back(r);
        }
        if (j.contains("output")) {
            cfg.output_csv = j["output"].value("csv", std::string());
            cfg.output_json = j["output"].value("json", std::string());
        }
        validate(cfg);
        return cfg;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config " + path + " is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

void validate(const ExperimentConfig& cfg)
{
    for (std::size_t i = 1; i < cfg.ranks.size(); ++i)
        if (cfg.ranks[i] <= cfg.ranks[i - 1])
            throw std::invalid_argument("rank grid must be strictly increasing");
    if (!cfg.ranks.empty() && cfg.ranks.front() < 1)
        throw std::invalid_argument("ranks must be positive");
    if (cfg.repeats < 1)
        throw std::invalid_argument("repeats must be at least 1");
    for (const auto& k : cfg.kernels)
        parse_kernel(k.name, k.param.value_or(1.0));
    for (const auto& m : cfg.methods) {
        if (m.kind != "one-sided" && m.kind != "two-sided" && m.kind != "symmetric" && m.kind != "aca" &&
            m.kind != "svd")
            throw std::invalid_argument("unknown method kind '" + m.kind + "'");
        if (m.oversample < 1.0)
            throw std::invalid_argument("oversample must be at least 1");
    }
    if (cfg.dataset.source != "synthetic" && cfg.dataset.source != "csv")
        throw std::invalid_argument("dataset source must be synthetic or csv");
}

std::string config_hash(const ExperimentConfig& cfg)
{
    json j = to_json(cfg);
    j.erase("output");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace geolr::harness
