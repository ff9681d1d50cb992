#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "pickwave/generator.hpp"
#include "pickwave/report.hpp"

namespace fs = std::filesystem;
using namespace pickwave;

namespace {

struct SolveFlags {
  std::string mode = "cgh";
  double time_limit = 3600.0;
  double pool_time = 600.0;
  double pricing_time = 180.0;
  double final_min = 600.0;
  double bin_time = 10.0;
  std::string cuts = "mt,fs,scc,r1c";
  bool plain_tour = false;
  bool no_mt = false, no_fs = false, no_sc = false, no_r1 = false;
  unsigned seed = 1;
  bool canonical_timing = false;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("--mode", f.mode, "cgh or exact")
      ->check(CLI::IsMember({"cgh", "exact"}));
  cmd->add_option("--time-limit", f.time_limit, "total time limit (s)");
  cmd->add_option("--pool-time", f.pool_time, "pool construction limit (s)");
  cmd->add_option("--pricing-time", f.pricing_time, "per-pricing limit (s)");
  cmd->add_option("--final-time", f.final_min, "minimum final MIP budget (s)");
  cmd->add_option("--bin-time", f.bin_time, "inner bin-solve budget (s)");
  cmd->add_option("--cuts", f.cuts, "enabled cut families, comma separated");
  cmd->add_flag("--plain-tour-constraints", f.plain_tour,
                "use unstrengthened tour constraints in pricing");
  cmd->add_flag("--no-mt", f.no_mt, "disable MT cuts");
  cmd->add_flag("--no-fs", f.no_fs, "disable FS cuts");
  cmd->add_flag("--no-sc", f.no_sc, "disable SCC cuts");
  cmd->add_flag("--no-r1", f.no_r1, "disable rank-1 cuts");
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_flag("--canonical-timing", f.canonical_timing,
                "zero wall-clock fields in reports");
}

EngineConfig make_config(const SolveFlags& f) {
  EngineConfig cfg;
  cfg.mode = f.mode == "exact" ? SolveMode::ExactEnum : SolveMode::Cgh;
  cfg.time_limit_s = f.time_limit;
  cfg.pool_time_s = f.pool_time;
  cfg.pricing_time_s = f.pricing_time;
  cfg.final_mip_min_s = f.final_min;
  cfg.bin_solve_s = f.bin_time;
  cfg.plain_tour_rows = f.plain_tour;
  cfg.seed = f.seed;
  cfg.use_mt = cfg.use_fs = cfg.use_scc = cfg.use_r1c = false;
  std::stringstream ss(f.cuts);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok == "mt")
      cfg.use_mt = true;
    else if (tok == "fs")
      cfg.use_fs = true;
    else if (tok == "scc")
      cfg.use_scc = true;
    else if (tok == "r1c")
      cfg.use_r1c = true;
    else if (!tok.empty())
      throw CLI::ValidationError("--cuts", "unknown cut family: " + tok);
  }
  if (f.no_mt) cfg.use_mt = false;
  if (f.no_fs) cfg.use_fs = false;
  if (f.no_sc) cfg.use_scc = false;
  if (f.no_r1) cfg.use_r1c = false;
  return cfg;
}

int exit_code_for(const RunResult& res) {
  if (res.status == SolveStatus::Infeasible) return 2;
  return 0;
}

int run_solve(const std::string& path, const SolveFlags& flags,
              const std::string& out, const std::string& plot) {
  Instance inst = load_instance(path);
  EngineConfig cfg = make_config(flags);
  RunResult res = run_instance(inst, cfg);
  RunReport rep = make_report(inst, cfg, res, flags.canonical_timing);
  std::cout << report_csv_header() << "\n" << report_csv_row(rep) << "\n";
  if (!out.empty()) {
    write_text_file(out + ".json", report_to_json(rep));
    write_text_file(out + ".csv",
                    report_csv_header() + "\n" + report_csv_row(rep) + "\n");
  }
  if (!plot.empty()) write_text_file(plot, gap_plot_svg(rep));
  return exit_code_for(res);
}

int run_batch(const std::string& dir, const SolveFlags& flags,
              const std::string& out) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::ostringstream csv;
  csv << report_csv_header() << "\n";
  double gap_sum = 0.0;
  long long gap_count = 0, failures = 0;
  for (const auto& p : files) {
    try {
      Instance inst = load_instance(p.string());
      EngineConfig cfg = make_config(flags);
      RunResult res = run_instance(inst, cfg);
      RunReport rep = make_report(inst, cfg, res, flags.canonical_timing);
      csv << report_csv_row(rep) << "\n";
      if (rep.bounds.ub && rep.bounds.lb > 0) {
        gap_sum += rep.bounds.gap_percent();
        ++gap_count;
      }
    } catch (const std::exception& e) {
      csv << p.filename().string() << ",error,,,,,,,,,,\n";
      ++failures;
      std::cerr << p.string() << ": " << e.what() << "\n";
    }
  }
  std::ostringstream mean;
  mean << "# instances=" << files.size() << " failures=" << failures
       << " mean_gap_pct=";
  if (gap_count > 0) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.4f", gap_sum / (double)gap_count);
    mean << buf;
  }
  csv << mean.str() << "\n";
  std::cout << csv.str();
  if (!out.empty()) write_text_file(out, csv.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Order batching, routing and sequencing solver"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "generate a random instance");
  GenParams gp;
  std::string gen_out;
  std::string profile = "uniform";
  gen->add_option("--seed", gp.seed, "random seed");
  gen->add_option("--orders", gp.num_orders, "number of orders");
  gen->add_option("--aisles", gp.num_aisles, "number of aisles");
  gen->add_option("--blocks", gp.num_blocks, "number of blocks");
  gen->add_option("--slots", gp.slots_per_aisle_side, "slots per aisle side");
  gen->add_option("--capacity", gp.capacity, "trolley capacity");
  gen->add_option("--pickers", gp.num_pickers, "number of pickers");
  gen->add_option("--min-items", gp.min_items_per_order, "min items per order");
  gen->add_option("--max-items", gp.max_items_per_order, "max items per order");
  gen->add_option("--pick-time", gp.pick_time, "pick time per item");
  gen->add_option("--setup-time", gp.setup_time, "setup time per route");
  gen->add_option("--profile", profile,
                  "deadline profile: uniform, progressive, degressive");
  gen->add_option("--out", gen_out, "output instance path")->required();

  auto* val = app.add_subcommand("validate", "validate an instance file");
  std::string val_path;
  val->add_option("instance", val_path, "instance path")->required();

  auto* solve = app.add_subcommand("solve", "solve one instance");
  std::string solve_path, solve_out, solve_plot;
  SolveFlags sflags;
  solve->add_option("instance", solve_path, "instance path")->required();
  add_solve_flags(solve, sflags);
  solve->add_option("--out", solve_out, "report path prefix");
  solve->add_option("--plot", solve_plot, "write bounds chart SVG");

  auto* batch = app.add_subcommand("batch", "solve a directory of instances");
  std::string batch_dir, batch_out;
  SolveFlags bflags;
  batch->add_option("dir", batch_dir, "instance directory")->required();
  add_solve_flags(batch, bflags);
  batch->add_option("--out", batch_out, "summary CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    if (gen->parsed()) {
      gp.deadline_profile = parse_deadline_profile(profile);
      Instance inst = generate_instance(gp);
      save_instance(inst, gen_out);
      std::cout << "wrote " << gen_out << "\n";
      return 0;
    }
    if (val->parsed()) {
      Instance inst = load_instance(val_path);
      validate_instance(inst);
      std::cout << inst.name << ": ok (" << inst.orders.size() << " orders, "
                << inst.num_pickers << " pickers)\n";
      return 0;
    }
    if (solve->parsed()) return run_solve(solve_path, sflags, solve_out, solve_plot);
    if (batch->parsed()) return run_batch(batch_dir, bflags, batch_out);
  } catch (const CLI::Error& e) {
    std::cerr << e.what() << "\n";
    return 64;
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << "\n";
    return 3;
  } catch (const TooManyLocations& e) {
    std::cerr << "routing limit: " << e.what() << "\n";
    return 3;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 64;
  } catch (const ValidationError& e) {
    std::cerr << "invalid instance: " << e.what() << "\n";
    return 64;
  } catch (const InfeasibleGeneration& e) {
    std::cerr << "generation failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 64;
}
