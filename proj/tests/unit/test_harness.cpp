#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "geolr/harness.hpp"
#include "test_helpers.hpp"

using namespace geolr;
namespace h = geolr::harness;

namespace {

h::ExperimentConfig small_sweep()
{
    h::ExperimentConfig c;
    c.name = "small";
    c.dataset.synthetic = {SyntheticKind::UniformBoxes, 120, 0, 2, 0.0, 0, 0.0, 3};
    c.kernels = {h::KernelConfig{"log-distance", std::nullopt, std::nullopt, "log"}};
    h::MethodConfig one;
    one.label = "dd";
    h::MethodConfig ac;
    ac.kind = "aca";
    h::MethodConfig sv;
    sv.kind = "svd";
    c.methods = {one, ac, sv};
    c.ranks = {2, 4, 8};
    c.repeats = 2;
    c.maxnorm = true;
    return c;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("csv rows round trip")
{
    std::vector<h::ResultRow> rows{
        {"dd-fps/k1", 10, 1.25e-5, std::nullopt, 0.0123, 1 << 20, 7, "00000000deadbeef", "synthetic"},
        {"aca/k1", 20, std::nullopt, 0.1 + 0.2, 1e-9, std::nullopt, 0, "0123456789abcdef", "synthetic-substitute"},
    };
    std::ostringstream os;
    h::write_csv(os, rows);
    CHECK(os.str().find("not-computed") != std::string::npos);
    CHECK(h::parse_csv_rows(os.str()) == rows);
    CHECK_THROWS(h::parse_csv_rows("method,rank\n"));
    rows[0].method = "a,b";
    std::ostringstream bad;
    CHECK_THROWS(h::write_csv(bad, rows));
}

TEST_CASE("config json round trip and hash")
{
    for (const auto& name : h::preset_names()) {
        const auto cfg = h::preset(name);
        CHECK_NOTHROW(h::validate(cfg));
        const auto back = h::config_from_json(h::to_json(cfg));
        CHECK(h::to_json(back) == h::to_json(cfg));
        CHECK(h::config_hash(back) == h::config_hash(cfg));
    }
    auto cfg = small_sweep();
    const auto base = h::config_hash(cfg);
    cfg.output_csv = "elsewhere.csv";
    CHECK(h::config_hash(cfg) == base);
    cfg.ranks.push_back(9);
    CHECK(h::config_hash(cfg) != base);
    CHECK(base.size() == 16);

    auto j = h::to_json(small_sweep());
    j["schema_version"] = 2;
    CHECK_THROWS(h::config_from_json(j));
    CHECK_THROWS(h::preset("test7"));
}

TEST_CASE("validation")
{
    auto cfg = small_sweep();
    cfg.ranks = {4, 2};
    CHECK_THROWS(h::validate(cfg));
    cfg = small_sweep();
    cfg.methods[0].kind = "hodlr";
    CHECK_THROWS(h::validate(cfg));
    cfg = small_sweep();
    cfg.repeats = 0;
    CHECK_THROWS(h::validate(cfg));
    cfg = small_sweep();
    cfg.ranks = {2, 500};
    CHECK_THROWS(h::run_experiment(cfg));
}

TEST_CASE("preset contents")
{
    const auto t6 = h::preset("test6-kernels");
    CHECK(t6.kernels.size() == 6);
    CHECK(t6.methods.size() == 3);
    CHECK(t6.ranks == std::vector<Index>{10, 50, 90, 130, 170, 210, 250});
    const auto t2 = h::preset("test2-selectors");
    CHECK(t2.methods.size() == 6);
    std::vector<double> fractions;
    for (const auto& m : t2.methods)
        if (m.selector.method == SelectionMethod::Mixed)
            fractions.push_back(m.selector.fps_fraction);
    CHECK(fractions == std::vector<double>{0.05, 0.10, 0.50});
    const auto e1 = h::preset("exp1-indicator");
    const auto data = h::load_dataset(e1.dataset);
    CHECK(data.x.size() == 50);
    CHECK(data.y.size() == 100);
    CHECK(e1.kernels.front().name == "log-distance");
}

TEST_CASE("sweep produces sorted deterministic rows")
{
    const auto cfg = small_sweep();
    const auto a = h::run_experiment(cfg);
    REQUIRE(a.rows.size() == 9);
    for (std::size_t i = 1; i < a.rows.size(); ++i) {
        const auto& p = a.rows[i - 1];
        const auto& q = a.rows[i];
        CHECK((p.method < q.method || (p.method == q.method && p.rank < q.rank)));
    }
    const auto b = h::run_experiment(cfg);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].rel2 == b.rows[i].rel2);
        CHECK(a.rows[i].maxnorm == b.rows[i].maxnorm);
        CHECK(a.rows[i].config_hash == h::config_hash(cfg));
        CHECK(a.rows[i].tag == "synthetic");
    }
    // Each row is above the SVD floor reported alongside it.
    std::map<Index, double> floor;
    for (const auto& r : a.rows)
        if (r.method == "svd/log")
            floor[r.rank] = *r.rel2;
    for (const auto& r : a.rows)
        CHECK(*r.rel2 >= floor.at(r.rank) - 1e-12);
}

TEST_CASE("empty rank grid")
{
    auto cfg = small_sweep();
    cfg.ranks.clear();
    CHECK(h::run_experiment(cfg).rows.empty());
}

TEST_CASE("outputs are written atomically")
{
    auto cfg = small_sweep();
    cfg.output_csv = "geolr_unit_rows.csv";
    cfg.output_json = "geolr_unit_rows.json";
    const auto res = h::run_experiment(cfg);
    CHECK(h::parse_csv_rows(slurp(cfg.output_csv)) == res.rows);
    const auto j = nlohmann::json::parse(slurp(cfg.output_json));
    CHECK(j["rows"].size() == res.rows.size());
    CHECK_FALSE(std::filesystem::exists(cfg.output_csv + ".tmp"));
    std::remove(cfg.output_csv.c_str());
    std::remove(cfg.output_json.c_str());
}

TEST_CASE("missing csv falls back to the synthetic analogue")
{
    auto cfg = h::preset("test6-kernels");
    cfg.dataset.csv_path = "no-such-file.csv";
    cfg.dataset.synthetic.n = 120;
    cfg.dataset.synthetic.dim = 5;
    cfg.ranks = {10, 50};
    cfg.kernels.resize(1);
    const auto res = h::run_experiment(cfg);
    REQUIRE_FALSE(res.rows.empty());
    CHECK(res.rows.front().tag == "synthetic-substitute");
    REQUIRE(res.checks.size() == 1);
    CHECK(res.checks.front().skipped);
}

TEST_CASE("real csv datasets are standardized and split")
{
    const std::string path = "geolr_unit_data.csv";
    {
        std::ofstream out(path);
        geolr::Rng rng(4);
        out << "a,b,c\n";
        for (int i = 0; i < 60; ++i)
            out << rng.uniform(0, 10) << ',' << rng.uniform(-3, 3) << ',' << rng.uniform(5, 6) << '\n';
    }
    h::DatasetConfig d;
    d.source = "csv";
    d.csv_path = path;
    d.y_rule = h::YRule::Split;
    d.standardize = true;
    d.m = 20;
    d.n = 30;
    d.seed = 2;
    const auto data = h::load_dataset(d);
    CHECK_FALSE(data.substitute);
    CHECK(data.x.size() == 20);
    CHECK(data.y.size() == 30);

    d.y_rule = h::YRule::ShiftedCopy;
    d.m = 0;
    const auto shifted = h::load_dataset(d);
    const double r = radius(shifted.x);
    const double expect = 2.0 * r / std::sqrt(3.0);
    CHECK((shifted.y.coords() - shifted.x.coords()).minCoeff() == doctest::Approx(expect));
    CHECK((shifted.y.coords() - shifted.x.coords()).maxCoeff() == doctest::Approx(expect));
    std::remove(path.c_str());
}

TEST_CASE("ratio study through the harness")
{
    auto cfg = h::preset("exp1-indicator");
    cfg.ranks = {4, 6};
    const auto res = h::run_experiment(cfg);
    CHECK(res.ratios.size() == 2);
    CHECK(res.rows.empty());
}

TEST_CASE("peak memory is reported")
{
    const auto p = h::peak_memory_bytes();
    REQUIRE(p);
    CHECK(*p > 0);
}
