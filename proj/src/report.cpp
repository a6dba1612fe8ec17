#include "vectorix/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace vectorix {
namespace {

std::string fmt1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

} // namespace

double round_rate(double mbps) {
    return std::round(mbps * 10.0) / 10.0;
}

std::string rates_csv(const std::vector<RateReport>& reports) {
    std::string out = "# vectorix-rates v1\n";
    out += "scheme,mean_mbps,min_mbps";
    const std::size_t lines = reports.empty() ? 0 : reports.front().line_mbps.size();
    for (std::size_t i = 0; i < lines; ++i) out += ",line" + std::to_string(i);
    out += "\n";
    for (const RateReport& r : reports) {
        out += r.label + "," + fmt1(round_rate(r.mean_mbps)) + "," + fmt1(round_rate(r.min_mbps));
        for (double v : r.line_mbps) out += "," + fmt1(round_rate(v));
        out += "\n";
    }
    return out;
}

std::string rates_per_line_csv(const std::vector<RateReport>& reports) {
    std::string out = "# vectorix-rates-per-line v1\nscheme,line,rate_mbps\n";
    for (const RateReport& r : reports)
        for (std::size_t i = 0; i < r.line_mbps.size(); ++i)
            out += r.label + "," + std::to_string(i) + "," + fmt1(round_rate(r.line_mbps[i])) + "\n";
    return out;
}

std::string rates_json(const std::vector<RateReport>& reports) {
    nlohmann::json root;
    root["version"] = "vectorix-rates v1";
    nlohmann::json rows = nlohmann::json::array();
    for (const RateReport& r : reports) {
        nlohmann::json row;
        row["scheme"] = r.label;
        row["mean_mbps"] = round_rate(r.mean_mbps);
        row["min_mbps"] = round_rate(r.min_mbps);
        nlohmann::json per_line = nlohmann::json::array();
        for (double v : r.line_mbps) per_line.push_back(round_rate(v));
        row["per_line_mbps"] = per_line;
        row["failed_tones"] = r.failed_tones;
        rows.push_back(row);
    }
    root["rows"] = rows;
    return root.dump(2) + "\n";
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "# vectorix-sweep-bdo v1\ndirection,bdo_hz,mean_mbps,min_mbps\n";
    for (const SweepRow& r : rows) {
        char bdo[32];
        std::snprintf(bdo, sizeof bdo, "%.17g", r.b_do_hz);
        out += r.direction + "," + bdo + "," + fmt1(round_rate(r.mean_mbps)) + "," +
               fmt1(round_rate(r.min_mbps)) + "\n";
    }
    return out;
}

std::string hist_csv(const std::vector<long>& counts) {
    std::string out = "# vectorix-hist-weakest v1\nline,count\n";
    for (std::size_t i = 0; i < counts.size(); ++i)
        out += std::to_string(i) + "," + std::to_string(counts[i]) + "\n";
    return out;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw Error("failed writing '" + path + "'");
}

} // namespace vectorix
