#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "pickwave/generator.hpp"
#include "pickwave/report.hpp"

using namespace pickwave;

namespace {

RunReport sample_report(bool canonical) {
  GenParams gp;
  gp.seed = 2;
  gp.num_orders = 5;
  Instance inst = generate_instance(gp);
  EngineConfig cfg;
  cfg.mode = SolveMode::Cgh;
  cfg.time_limit_s = 60.0;
  cfg.pool_time_s = 5.0;
  cfg.pricing_time_s = 20.0;
  cfg.final_mip_min_s = 5.0;
  auto res = run_cgh(inst, cfg);
  return make_report(inst, cfg, res, canonical);
}

}  // namespace

TEST_CASE("csv header is stable") {
  CHECK(report_csv_header() ==
        "id,mode,UB,LB,gap_pct,cpu_s,n_cols,n_pricing_iters,cuts_mt,cuts_fs,"
        "cuts_scc,cuts_r1c");
}

TEST_CASE("csv row field count and content") {
  RunReport r;
  r.instance_id = "foo";
  r.mode = "cgh";
  r.status = "optimal";
  r.bounds.lb = 100;
  r.bounds.ub = 110;
  r.stats.n_columns = 42;
  r.stats.n_pricing_iterations = 7;
  r.stats.cuts_mt = 1;
  r.stats.cuts_fs = 2;
  r.stats.cuts_scc = 3;
  r.stats.cuts_r1c = 4;
  r.stats.total_time_s = 1.5;
  std::string row = report_csv_row(r);
  CHECK(row == "foo,cgh,110,100,10.0000,1.50,42,7,1,2,3,4");
  CHECK(std::count(row.begin(), row.end(), ',') ==
        std::count(report_csv_header().begin(), report_csv_header().end(),
                   ','));

  RunReport empty;
  empty.instance_id = "bar";
  empty.mode = "exact";
  std::string row2 = report_csv_row(empty);
  CHECK(row2.rfind("bar,exact,,0,,", 0) == 0);
  CHECK(std::count(row2.begin(), row2.end(), ',') ==
        std::count(report_csv_header().begin(), report_csv_header().end(),
                   ','));
}

TEST_CASE("json round trips through a parser") {
  RunReport r = sample_report(false);
  std::string text = report_to_json(r);
  auto j = nlohmann::json::parse(text);
  CHECK(j["id"] == r.instance_id);
  CHECK(j["mode"] == "cgh");
  CHECK(j["lb"].get<long long>() == r.bounds.lb);
  if (r.bounds.ub)
    CHECK(j["ub"].get<long long>() == *r.bounds.ub);
  CHECK(j["n_cols"].get<long long>() == r.stats.n_columns);
  CHECK(j["cuts"]["mt"].get<int>() == r.stats.cuts_mt);
  CHECK(j["trace"].size() == r.stats.trace.size());
  CHECK(text.back() == '\n');
}

TEST_CASE("canonical reports from identical runs are byte identical") {
  RunReport a = sample_report(true);
  RunReport b = sample_report(true);
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(report_csv_row(a) == report_csv_row(b));
  CHECK(a.stats.total_time_s == 0.0);
  CHECK(report_to_json(a).find("\"total_s\": \"0.00\"") != std::string::npos);
}

TEST_CASE("svg plot is well formed") {
  RunReport r = sample_report(false);
  std::string svg = gap_plot_svg(r);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("xmlns") != std::string::npos);
  RunReport empty;
  empty.instance_id = "none";
  std::string svg2 = gap_plot_svg(empty);
  CHECK(svg2.rfind("<svg", 0) == 0);
  CHECK(svg2.find("</svg>") != std::string::npos);
}

TEST_CASE("text files land on disk intact") {
  std::string path = "report_tmp_test.txt";
  write_text_file(path, "hello\nworld\n");
  std::ifstream in(path, std::ios::binary);
  std::string got((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
  CHECK(got == "hello\nworld\n");
  in.close();
  std::remove(path.c_str());
  CHECK_THROWS(write_text_file("no_such_dir_xyz/file.txt", "x"));
}
