#pragma once

#include <string>

#include "pickwave/engine.hpp"

namespace pickwave {

struct RunReport {
  std::string instance_id;
  std::string mode;
  std::string status;
  Bounds bounds;
  RunStats stats;
};

// canonical_timing zeroes every wall-clock field so reports from identical
// runs compare byte for byte.
RunReport make_report(const Instance& inst, const EngineConfig& cfg,
                      const RunResult& result, bool canonical_timing);

std::string report_to_json(const RunReport& r);
std::string report_csv_header();
std::string report_csv_row(const RunReport& r);

// bounds-versus-iteration chart
std::string gap_plot_svg(const RunReport& r);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace pickwave
