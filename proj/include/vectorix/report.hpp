#pragma once

#include <string>
#include <vector>

#include "vectorix/evaluate.hpp"

namespace vectorix {

/// Rate rounded to the 0.1 Mbps reported in all outputs.
double round_rate(double mbps);

struct SweepRow {
    std::string direction;  // "DO-IVB" or "IVB-DO"
    double b_do_hz = 0.0;
    double mean_mbps = 0.0;
    double min_mbps = 0.0;
};

/// `# vectorix-rates v1` / scheme,mean_mbps,min_mbps,line0..line{L-1}
std::string rates_csv(const std::vector<RateReport>& reports);

/// `# vectorix-rates-per-line v1` / scheme,line,rate_mbps
std::string rates_per_line_csv(const std::vector<RateReport>& reports);

/// JSON mirror of rates_csv; values rounded identically.
std::string rates_json(const std::vector<RateReport>& reports);

/// `# vectorix-sweep-bdo v1` / direction,bdo_hz,mean_mbps,min_mbps
std::string sweep_csv(const std::vector<SweepRow>& rows);

/// `# vectorix-hist-weakest v1` / line,count
std::string hist_csv(const std::vector<long>& counts);

void write_text_file(const std::string& path, const std::string& content);

} // namespace vectorix
