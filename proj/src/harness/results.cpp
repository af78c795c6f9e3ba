#include <sys/resource.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "geolr/harness.hpp"

namespace geolr::harness {

namespace {

constexpr const char* header = "method,rank,rel2,maxnorm,wall_time_s,peak_memory_bytes,seed,config_hash,tag";
constexpr const char* not_computed = "not-computed";

std::string number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream is(line);
    while (std::getline(is, field, ','))
        out.push_back(field);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

std::optional<double> parse_error(const std::string& s)
{
    if (s == not_computed)
        return std::nullopt;
    return std::stod(s);
}

} // namespace

void write_csv(std::ostream& os, const std::vector<ResultRow>& rows)
{
    os << header << '\n';
    for (const auto& r : rows) {
        if (r.method.find(',') != std::string::npos || r.tag.find(',') != std::string::npos)
            throw std::invalid_argument("result labels must not contain commas");
        os << r.method << ',' << r.rank << ',' << (r.rel2 ? number(*r.rel2) : not_computed) << ','
           << (r.maxnorm ? number(*r.maxnorm) : not_computed) << ',' << number(r.wall_time_s) << ','
           << (r.peak_memory_bytes ? std::to_string(*r.peak_memory_bytes) : std::string()) << ',' << r.seed << ','
           << r.config_hash << ',' << r.tag << '\n';
    }
}

std::vector<ResultRow> parse_csv_rows(const std::string& text)
{
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != header)
        throw std::invalid_argument("results CSV: unexpected header");
    std::vector<ResultRow> rows;
    while (std::getline(is, line)) {
        if (line.empty())
            continue;
        const auto f = split(line);
        if (f.size() != 9)
            throw std::invalid_argument("results CSV: expected 9 fields in '" + line + "'");
        ResultRow r;
        r.method = f[0];
        r.rank = std::stoll(f[1]);
        r.rel2 = parse_error(f[2]);
        r.maxnorm = parse_error(f[3]);
        r.wall_time_s = std::stod(f[4]);
        if (!f[5].empty())
            r.peak_memory_bytes = std::stoll(f[5]);
        r.seed = std::stoull(f[6]);
        r.config_hash = f[7];
        r.tag = f[8];
        rows.push_back(r);
    }
    return rows;
}

nlohmann::json rows_to_json(const std::vector<ResultRow>& rows)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json j{{"method", r.method},
                         {"rank", r.rank},
                         {"wall_time_s", r.wall_time_s},
                         {"seed", r.seed},
                         {"config_hash", r.config_hash},
                         {"tag", r.tag}};
        j["rel2"] = r.rel2 ? nlohmann::json(*r.rel2) : nlohmann::json(not_computed);
        j["maxnorm"] = r.maxnorm ? nlohmann::json(*r.maxnorm) : nlohmann::json(not_computed);
        j["peak_memory_bytes"] = r.peak_memory_bytes ? nlohmann::json(*r.peak_memory_bytes) : nlohmann::json();
        out.push_back(j);
    }
    return out;
}

void write_atomic(const std::string& path, const std::string& content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp);
        out << content;
        out.flush();
        if (!out)
            throw std::runtime_error("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

std::optional<std::int64_t> peak_memory_bytes()
{
    rusage usage{};
    if (getrusage(RUSAGE_SELF, &usage) != 0)
        return std::nullopt;
    return static_cast<std::int64_t>(usage.ru_maxrss) * 1024;
}

} // namespace geolr::harness
