#include "pickwave/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pickwave {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::TimeLimit: return "time_limit";
    case SolveStatus::IterLimit: return "iter_limit";
  }
  return "unknown";
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

RunReport make_report(const Instance& inst, const EngineConfig& cfg,
                      const RunResult& result, bool canonical_timing) {
  RunReport r;
  r.instance_id = inst.name;
  r.mode = cfg.mode == SolveMode::Cgh ? "cgh" : "exact";
  r.status = status_name(result.status);
  r.bounds = result.bounds;
  r.stats = result.stats;
  if (canonical_timing) {
    r.stats.pool_time_s = 0.0;
    r.stats.cg_time_s = 0.0;
    r.stats.cut_time_s = 0.0;
    r.stats.final_time_s = 0.0;
    r.stats.total_time_s = 0.0;
  }
  return r;
}

std::string report_to_json(const RunReport& r) {
  ordered_json j;
  j["id"] = r.instance_id;
  j["mode"] = r.mode;
  j["status"] = r.status;
  if (r.bounds.ub)
    j["ub"] = *r.bounds.ub;
  else
    j["ub"] = nullptr;
  j["lb"] = r.bounds.lb;
  if (r.bounds.ub && r.bounds.lb > 0)
    j["gap_pct"] = fixed4(r.bounds.gap_percent());
  else
    j["gap_pct"] = nullptr;
  j["n_cols"] = r.stats.n_columns;
  j["n_pricing_iters"] = r.stats.n_pricing_iterations;
  ordered_json cuts;
  cuts["mt"] = r.stats.cuts_mt;
  cuts["fs"] = r.stats.cuts_fs;
  cuts["scc"] = r.stats.cuts_scc;
  cuts["r1c"] = r.stats.cuts_r1c;
  j["cuts"] = cuts;
  j["cut_rounds"] = r.stats.cut_rounds;
  j["lp_converged"] = r.stats.lp_converged;
  j["scc_pool_overflow"] = r.stats.scc_pool_overflow;
  ordered_json times;
  times["pool_s"] = fixed2(r.stats.pool_time_s);
  times["cg_s"] = fixed2(r.stats.cg_time_s);
  times["cuts_s"] = fixed2(r.stats.cut_time_s);
  times["final_s"] = fixed2(r.stats.final_time_s);
  times["total_s"] = fixed2(r.stats.total_time_s);
  j["times"] = times;
  ordered_json trace = ordered_json::array();
  for (const auto& it : r.stats.trace) {
    ordered_json e;
    e["rmp"] = fixed4(it.rmp_obj);
    e["pricing_bound"] = fixed4(it.pricing_bound);
    e["lb"] = it.lb_after;
    e["cuts_active"] = it.n_cuts_active;
    trace.push_back(e);
  }
  j["trace"] = trace;
  return j.dump(2) + "\n";
}

std::string report_csv_header() {
  return "id,mode,UB,LB,gap_pct,cpu_s,n_cols,n_pricing_iters,cuts_mt,cuts_fs,"
         "cuts_scc,cuts_r1c";
}

std::string report_csv_row(const RunReport& r) {
  std::ostringstream os;
  os << r.instance_id << ',' << r.mode << ',';
  if (r.bounds.ub) os << *r.bounds.ub;
  os << ',' << r.bounds.lb << ',';
  if (r.bounds.ub && r.bounds.lb > 0) os << fixed4(r.bounds.gap_percent());
  os << ',' << fixed2(r.stats.total_time_s) << ',' << r.stats.n_columns << ','
     << r.stats.n_pricing_iterations << ',' << r.stats.cuts_mt << ','
     << r.stats.cuts_fs << ',' << r.stats.cuts_scc << ',' << r.stats.cuts_r1c;
  return os.str();
}

std::string gap_plot_svg(const RunReport& r) {
  const int w = 640, h = 360, mleft = 60, mbot = 40, mtop = 20, mright = 20;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\">\n";
  os << "<rect width=\"" << w << "\" height=\"" << h
     << "\" fill=\"white\"/>\n";
  const auto& tr = r.stats.trace;
  double ymax = 1.0, ymin = 0.0;
  for (const auto& it : tr) {
    ymax = std::max(ymax, it.rmp_obj);
    ymax = std::max(ymax, (double)it.lb_after);
  }
  if (r.bounds.ub) ymax = std::max(ymax, (double)*r.bounds.ub);
  ymax *= 1.05;
  auto px = [&](size_t i) {
    double n = tr.size() > 1 ? (double)(tr.size() - 1) : 1.0;
    return mleft + (double)(w - mleft - mright) * (double)i / n;
  };
  auto py = [&](double v) {
    return (double)(h - mbot) -
           (double)(h - mbot - mtop) * (v - ymin) / (ymax - ymin);
  };
  os << "<line x1=\"" << mleft << "\" y1=\"" << h - mbot << "\" x2=\""
     << w - mright << "\" y2=\"" << h - mbot
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << mleft << "\" y1=\"" << mtop << "\" x2=\"" << mleft
     << "\" y2=\"" << h - mbot << "\" stroke=\"black\"/>\n";
  auto polyline = [&](const char* color, bool use_lb) {
    if (tr.empty()) return;
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.5\" points=\"";
    for (size_t i = 0; i < tr.size(); ++i)
      os << px(i) << ',' << py(use_lb ? (double)tr[i].lb_after : tr[i].rmp_obj)
         << ' ';
    os << "\"/>\n";
  };
  polyline("#1f77b4", false);
  polyline("#2ca02c", true);
  if (r.bounds.ub) {
    double y = py((double)*r.bounds.ub);
    os << "<line x1=\"" << mleft << "\" y1=\"" << y << "\" x2=\""
       << w - mright << "\" y2=\"" << y
       << "\" stroke=\"#d62728\" stroke-dasharray=\"4 3\"/>\n";
  }
  os << "<text x=\"" << mleft + 6 << "\" y=\"" << mtop + 12
     << "\" font-size=\"11\">rmp (blue), LB (green), UB (red)</text>\n";
  os << "<text x=\"" << (w / 2) << "\" y=\"" << h - 10
     << "\" font-size=\"11\">pricing iteration</text>\n";
  os << "</svg>\n";
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace pickwave
