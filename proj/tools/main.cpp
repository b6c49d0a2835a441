#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "output.hpp"
#include "riskdiff/core.hpp"
#include "riskdiff/exact.hpp"
#include "riskdiff/intervals.hpp"
#include "riskdiff/opchar.hpp"
#include "riskdiff/oracle.hpp"
#include "riskdiff/stats.hpp"

using namespace riskdiff;
using cli::CsvTable;
using cli::JsonDoc;
using cli::JsonValue;

namespace {

struct CommonOpts {
  int grid_pt = 1001;
  double grid_delta = 1e-3;
  int threads = 1;
  std::string format = "json";
  std::string out;
};

GridConfig grid_of(const CommonOpts& c) {
  GridConfig g;
  g.pt_points = c.grid_pt;
  g.delta_step = c.grid_delta;
  return g;
}

std::string config_text(const std::vector<std::pair<std::string, std::string>>& kv) {
  std::string s;
  for (const auto& [k, v] : kv) {
    if (!s.empty()) s += " ";
    s += k + "=" + v;
  }
  return s;
}

void emit(const CommonOpts& opts, const JsonDoc& doc, const CsvTable& csv,
          const std::string& summary) {
  if (!opts.out.empty()) {
    cli::atomic_write(opts.out,
                      opts.format == "csv" ? csv.dump() : doc.dump());
    std::fputs(summary.c_str(), stdout);
  } else {
    std::fputs(opts.format == "csv" ? csv.dump().c_str() : doc.dump().c_str(),
               stdout);
  }
}

void put_config(JsonDoc& doc, CsvTable& csv,
                const std::vector<std::pair<std::string, std::string>>& kv) {
  for (const auto& [k, v] : kv) doc.set("config", k, JsonValue::of(v));
  csv.config_line = config_text(kv);
}

Method parse_method(const std::string& name) {
  if (name == "wald") return Method::wald;
  if (name == "mn") return Method::mn;
  if (name == "cz") return Method::cz;
  if (name == "ec") return Method::ec;
  throw CLI::ValidationError("--method", "unknown method '" + name + "'");
}

// ---------------------------------------------------------------- pvalue --

int cmd_pvalue(int xt, int nt, int xc, int nc, double delta0,
               const CommonOpts& opts) {
  TrialDesign design(nt, nc);
  ObservedTable table{xt, xc};
  require_valid(table, design);
  Margin margin(delta0);
  const GridConfig grid = grid_of(opts);

  const auto exact = p_exact(table, design, margin, grid);
  const auto cz = p_cz(table, design, margin, grid);
  const double mn = p_asy(table, design, margin);
  const double wald = p_wald(table, design, margin);

  JsonDoc doc;
  CsvTable csv;
  const std::vector<std::pair<std::string, std::string>> kv = {
      {"command", "pvalue"},
      {"xt", std::to_string(xt)},
      {"nt", std::to_string(nt)},
      {"xc", std::to_string(xc)},
      {"nc", std::to_string(nc)},
      {"delta0", cli::csv_number(delta0)},
      {"grid_pt", std::to_string(opts.grid_pt)},
      {"grid_delta", cli::csv_number(opts.grid_delta)},
      {"threads", std::to_string(opts.threads)}};
  put_config(doc, csv, kv);

  doc.set("results", "exact", JsonValue::of(exact.value));
  doc.set("results", "cz", JsonValue::of(cz.value));
  doc.set("results", "mn", JsonValue::of(mn));
  doc.set("results", "wald", JsonValue::of(wald));
  doc.set("detail", "exact_argmax_pt", JsonValue::of(exact.argmax_p_t));
  doc.set("detail", "cz_argmax_delta", JsonValue::of(cz.argmax_delta));
  doc.set("detail", "grid_points", JsonValue::of(exact.grid_points));

  csv.header = {"exact", "cz", "mn", "wald"};
  std::vector<std::string> row = {cli::csv_number(exact.value),
                                  cli::csv_number(cz.value),
                                  cli::csv_number(mn), cli::csv_number(wald)};
  char line[256];
  std::snprintf(line, sizeof(line),
                "exact=%.3f cz=%.3f mn=%.3f wald=%.3f", exact.value, cz.value,
                mn, wald);
  std::string summary = line;
  if (delta0 == 0.0) {
    const double fisher = fisher_exact(table, design);
    doc.set("results", "fisher", JsonValue::of(fisher));
    csv.header.push_back("fisher");
    row.push_back(cli::csv_number(fisher));
    std::snprintf(line, sizeof(line), " fisher=%.3f", fisher);
    summary += line;
  }
  summary += "\n";
  csv.add_row(row);
  emit(opts, doc, csv, summary);
  return 0;
}

// -------------------------------------------------------------------- ci --

int cmd_ci(int xt, int nt, int xc, int nc, double alpha, double delta0,
           bool has_delta0, const std::vector<std::string>& methods,
           const CommonOpts& opts) {
  TrialDesign design(nt, nc);
  ObservedTable table{xt, xc};
  require_valid(table, design);
  const GridConfig grid = grid_of(opts);

  std::vector<std::string> wanted = methods;
  if (wanted.empty()) wanted = {"wald", "mn", "cz", "ec"};

  JsonDoc doc;
  CsvTable csv;
  std::vector<std::pair<std::string, std::string>> kv = {
      {"command", "ci"},
      {"xt", std::to_string(xt)},
      {"nt", std::to_string(nt)},
      {"xc", std::to_string(xc)},
      {"nc", std::to_string(nc)},
      {"alpha", cli::csv_number(alpha)},
      {"grid_pt", std::to_string(opts.grid_pt)},
      {"grid_delta", cli::csv_number(opts.grid_delta)}};
  if (has_delta0) kv.emplace_back("delta0", cli::csv_number(delta0));
  put_config(doc, csv, kv);

  csv.header = {"method", "lower", "upper", "level", "monotone_ok",
                "elapsed_ms"};
  std::string summary;
  for (const auto& name : wanted) {
    const Method meth = parse_method(name);
    if (meth == Method::ec && !has_delta0) {
      std::cerr << "ci: --delta0 is required when the ec method is requested\n";
      return 2;
    }
    const auto t0 = std::chrono::steady_clock::now();
    Interval iv;
    switch (meth) {
      case Method::wald: iv = ci_wald(table, design, alpha); break;
      case Method::mn: iv = ci_mn(table, design, alpha); break;
      case Method::cz: iv = ci_cz(table, design, alpha, grid); break;
      case Method::ec:
        iv = ci_ec(table, design, Margin(delta0), alpha, grid);
        break;
    }
    const double ms =
        std::chrono::duration<double, std::milli>(
            std::chrono::steady_clock::now() - t0)
            .count();
    doc.set(name, "lower", JsonValue::of(iv.lower));
    doc.set(name, "upper", JsonValue::of(iv.upper));
    doc.set(name, "level", JsonValue::of(iv.level));
    doc.set(name, "monotone_ok", JsonValue::of(iv.monotone_ok));
    doc.set(name, "elapsed_ms", JsonValue::of(ms));
    csv.add_row({name, cli::csv_number(iv.lower), cli::csv_number(iv.upper),
                 cli::csv_number(iv.level), iv.monotone_ok ? "1" : "0",
                 cli::csv_number(ms)});
    char line[160];
    std::snprintf(line, sizeof(line), "%-4s (%.4f, %.4f)%s\n", name.c_str(),
                  iv.lower, iv.upper, iv.monotone_ok ? "" : "  [non-monotone]");
    summary += line;
  }
  emit(opts, doc, csv, summary);
  return 0;
}

// ---------------------------------------------------------------- opchar --

void write_pair(const CommonOpts& opts, const JsonDoc& doc,
                const CsvTable& csv) {
  if (opts.out.empty()) {
    std::fputs(doc.dump().c_str(), stdout);
    return;
  }
  cli::atomic_write(opts.out + ".csv", csv.dump());
  cli::atomic_write(opts.out + ".json", doc.dump());
  std::printf("wrote %s.csv and %s.json\n", opts.out.c_str(),
              opts.out.c_str());
}

int cmd_maxsize(int nt, int nc, double delta0, double alpha,
                const std::vector<std::string>& methods,
                const CommonOpts& opts) {
  TrialDesign design(nt, nc);
  Margin margin(delta0);
  const GridConfig grid = grid_of(opts);
  std::vector<std::string> wanted = methods;
  if (wanted.empty()) wanted = {"wald", "mn", "cz", "ec"};

  JsonDoc doc;
  CsvTable csv;
  put_config(doc, csv,
             {{"command", "opchar maxsize"},
              {"nt", std::to_string(nt)},
              {"nc", std::to_string(nc)},
              {"delta0", cli::csv_number(delta0)},
              {"alpha", cli::csv_number(alpha)},
              {"grid_pt", std::to_string(opts.grid_pt)},
              {"grid_delta", cli::csv_number(opts.grid_delta)}});
  csv.header = {"method", "delta", "sup_size_at_delta"};

  for (const auto& name : wanted) {
    const Method meth = parse_method(name);
    const auto region = critical_region(design, margin, alpha, meth, grid);
    const auto ms = maximal_size(region);
    doc.set(name, "maximal_size", JsonValue::of(ms.value));
    doc.set(name, "argsup_pt", JsonValue::of(ms.arg_sup.p_t));
    doc.set(name, "argsup_delta", JsonValue::of(ms.arg_sup.delta));
    doc.set(name, "boundary_value", JsonValue::of(ms.boundary_value));
    doc.set(name, "rejected_tables", JsonValue::of(region.reject_count()));

    // delta profile of the size for the CSV
    for (double d = -1.0; d <= -delta0 + 1e-15; d += 0.01) {
      const double dd = std::min(d, -delta0);
      const double lo = std::max(0.0, dd), hi = std::min(1.0, 1.0 + dd);
      double best = 0.0;
      for (int i = 0; i < 201; ++i) {
        const double p = lo + (hi - lo) * i / 200.0;
        best = std::max(best, conditional_size(region, {p, dd}));
      }
      csv.add_row({name, cli::csv_number(dd), cli::csv_number(best)});
    }
  }
  write_pair(opts, doc, csv);
  return 0;
}

int cmd_power(int nt, int nc, double delta0, double alpha, double pt,
              const CommonOpts& opts) {
  TrialDesign design(nt, nc);
  Margin margin(delta0);
  const GridConfig grid = grid_of(opts);

  std::vector<double> dgrid;
  for (double d = std::max(-1.0, pt - 1.0); d <= std::min(1.0, pt) + 1e-12;
       d += 0.01)
    dgrid.push_back(d);
  const auto pc = power_curve(design, margin, alpha, pt, dgrid, grid);

  JsonDoc doc;
  CsvTable csv;
  put_config(doc, csv,
             {{"command", "opchar power"},
              {"nt", std::to_string(nt)},
              {"nc", std::to_string(nc)},
              {"delta0", cli::csv_number(delta0)},
              {"alpha", cli::csv_number(alpha)},
              {"pt", cli::csv_number(pt)},
              {"grid_pt", std::to_string(opts.grid_pt)},
              {"grid_delta", cli::csv_number(opts.grid_delta)}});
  doc.set("summary", "n_aa", JsonValue::of(pc.n_aa));
  doc.set("summary", "n_ar", JsonValue::of(pc.n_ar));
  doc.set("summary", "n_rr", JsonValue::of(pc.n_rr));

  csv.header = {"delta", "admissible", "wald", "mn", "cz", "ec"};
  for (size_t k = 0; k < pc.delta_grid.size(); ++k) {
    csv.add_row({cli::csv_number(pc.delta_grid[k]),
                 pc.admissible[k] ? "1" : "0",
                 cli::csv_number(pc.reject_prob[0][k]),
                 cli::csv_number(pc.reject_prob[1][k]),
                 cli::csv_number(pc.reject_prob[2][k]),
                 cli::csv_number(pc.reject_prob[3][k])});
  }
  write_pair(opts, doc, csv);
  return 0;
}

int cmd_ec_expectation(int nt, int nc, double delta0, double pt, double pc_,
                       int nsims, long long seed, const CommonOpts& opts) {
  TrialDesign design(nt, nc);
  Margin margin(delta0);
  const auto r = ec_expectation(design, pt, pc_, margin, nsims,
                                static_cast<std::uint64_t>(seed),
                                grid_of(opts), opts.threads);
  JsonDoc doc;
  CsvTable csv;
  put_config(doc, csv,
             {{"command", "opchar ec-expectation"},
              {"nt", std::to_string(nt)},
              {"nc", std::to_string(nc)},
              {"delta0", cli::csv_number(delta0)},
              {"pt", cli::csv_number(pt)},
              {"pc", cli::csv_number(pc_)},
              {"nsims", std::to_string(nsims)},
              {"seed", std::to_string(seed)},
              {"grid_pt", std::to_string(opts.grid_pt)},
              {"threads", std::to_string(opts.threads)}});
  doc.set("results", "mean", JsonValue::of(r.mean));
  doc.set("results", "std_error", JsonValue::of(r.std_error));
  doc.set("results", "degenerate_draws", JsonValue::of(r.degenerate_draws));
  doc.set("results", "n_sims", JsonValue::of(r.n_sims));
  csv.header = {"mean", "std_error", "degenerate_draws", "n_sims"};
  csv.add_row({cli::csv_number(r.mean), cli::csv_number(r.std_error),
               std::to_string(r.degenerate_draws), std::to_string(r.n_sims)});
  write_pair(opts, doc, csv);
  return 0;
}

// ------------------------------------------------------------- reproduce --

struct ExampleSpec {
  std::string name;
  int xt, nt, xc, nc;
  double delta0;
  double alpha;
};

int cmd_reproduce(const std::string& out_dir, int nsims, long long seed,
                  const CommonOpts& opts) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const GridConfig grid = grid_of(opts);
  const std::string base_cfg =
      config_text({{"grid_pt", std::to_string(opts.grid_pt)},
                   {"grid_delta", cli::csv_number(opts.grid_delta)},
                   {"nsims", std::to_string(nsims)},
                   {"seed", std::to_string(seed)},
                   {"threads", std::to_string(opts.threads)}});

  std::vector<std::pair<std::string, std::string>> status;
  auto run_item = [&](const std::string& file, auto&& fn) {
    try {
      fn();
      status.emplace_back(file, "ok");
    } catch (const std::exception& e) {
      status.emplace_back(file, std::string("failed: ") + e.what());
    }
  };

  const std::vector<ExampleSpec> table_examples = {
      {"example1", 5, 8, 10, 19, 0.10, 0.5},
      {"example2", 5, 6, 2, 6, 0.12, 0.05},
      {"example3", 7, 18, 5, 25, 0.10, 0.05}};
  const std::vector<ExampleSpec> data_examples = {
      {"rodary", 83, 88, 69, 76, 0.10, 0.05},
      {"fries", 8, 15, 3, 15, 0.0, 0.05},
      {"kim", 173, 181, 174, 181, 0.05, 0.05}};

  run_item("examples_table.csv", [&] {
    CsvTable csv;
    csv.config_line = "command=reproduce " + base_cfg;
    csv.header = {"example", "xt", "nt", "xc", "nc", "delta0", "alpha_half",
                  "p_ec", "p_cz", "p_mn", "p_wald", "maxsize_ec",
                  "maxsize_cz", "maxsize_mn", "maxsize_wald"};
    for (const auto& e : table_examples) {
      TrialDesign d(e.nt, e.nc);
      ObservedTable t{e.xt, e.xc};
      Margin m(e.delta0);
      const double pe = p_exact(t, d, m, grid).value;
      const double pcz = p_cz(t, d, m, grid).value;
      const double pmn = p_asy(t, d, m);
      const double pw = p_wald(t, d, m);
      double ms[4];
      for (Method meth :
           {Method::ec, Method::cz, Method::mn, Method::wald})
        ms[meth == Method::ec   ? 0
           : meth == Method::cz ? 1
           : meth == Method::mn ? 2
                                : 3] =
            maximal_size(d, m, e.alpha, meth, {}, grid).value;
      csv.add_row({e.name, std::to_string(e.xt), std::to_string(e.nt),
                   std::to_string(e.xc), std::to_string(e.nc),
                   cli::csv_number(e.delta0), cli::csv_number(e.alpha / 2),
                   cli::csv_number(pe), cli::csv_number(pcz),
                   cli::csv_number(pmn), cli::csv_number(pw),
                   cli::csv_number(ms[0]), cli::csv_number(ms[1]),
                   cli::csv_number(ms[2]), cli::csv_number(ms[3])});
    }
    cli::atomic_write(out_dir + "/examples_table.csv", csv.dump());
  });

  run_item("intervals_examples.csv", [&] {
    CsvTable csv;
    csv.config_line = "command=reproduce " + base_cfg;
    csv.header = {"example", "method", "alpha", "lower", "upper",
                  "monotone_ok"};
    auto add = [&](const ExampleSpec& e) {
      TrialDesign d(e.nt, e.nc);
      ObservedTable t{e.xt, e.xc};
      const Interval ivs[4] = {ci_wald(t, d, e.alpha), ci_mn(t, d, e.alpha),
                               ci_cz(t, d, e.alpha, grid),
                               ci_ec(t, d, Margin(e.delta0), e.alpha, grid)};
      const char* names[4] = {"wald", "mn", "cz", "ec"};
      for (int i = 0; i < 4; ++i)
        csv.add_row({e.name, names[i], cli::csv_number(e.alpha),
                     cli::csv_number(ivs[i].lower),
                     cli::csv_number(ivs[i].upper),
                     ivs[i].monotone_ok ? "1" : "0"});
    };
    for (const auto& e : table_examples) add(e);
    for (const auto& e : data_examples) add(e);
    cli::atomic_write(out_dir + "/intervals_examples.csv", csv.dump());
  });

  auto power_file = [&](const std::string& file, int nt, int nc, double d0,
                        double alpha, double pt) {
    run_item(file, [&] {
      TrialDesign d(nt, nc);
      Margin m(d0);
      std::vector<double> dgrid;
      for (double x = std::max(-1.0, pt - 1.0);
           x <= std::min(1.0, pt) + 1e-12; x += 0.01)
        dgrid.push_back(x);
      const auto pc = power_curve(d, m, alpha, pt, dgrid, grid);
      CsvTable csv;
      csv.config_line = config_text(
          {{"command", "reproduce"},
           {"nt", std::to_string(nt)},
           {"nc", std::to_string(nc)},
           {"delta0", cli::csv_number(d0)},
           {"alpha", cli::csv_number(alpha)},
           {"pt", cli::csv_number(pt)},
           {"n_aa", std::to_string(pc.n_aa)},
           {"n_ar", std::to_string(pc.n_ar)},
           {"n_rr", std::to_string(pc.n_rr)}});
      csv.header = {"delta", "admissible", "wald", "mn", "cz", "ec"};
      for (size_t k = 0; k < dgrid.size(); ++k)
        csv.add_row({cli::csv_number(dgrid[k]), pc.admissible[k] ? "1" : "0",
                     cli::csv_number(pc.reject_prob[0][k]),
                     cli::csv_number(pc.reject_prob[1][k]),
                     cli::csv_number(pc.reject_prob[2][k]),
                     cli::csv_number(pc.reject_prob[3][k])});
      cli::atomic_write(out_dir + "/" + file, csv.dump());
    });
  };
  power_file("power_fig3a.csv", 5, 11, 0.03, 0.7, 0.95);
  power_file("power_fig3b.csv", 12, 5, 0.33, 0.1, 0.1);

  run_item("fig1_curve.csv", [&] {
    CsvTable csv;
    csv.config_line = "command=reproduce xt=5 xc=10 nc=19 variants=nt8,nt9 " +
                      base_cfg;
    csv.header = {"nt", "delta", "p_l", "running_max"};
    for (int nt : {8, 9}) {
      const auto curve =
          pl_curve({5, 10}, TrialDesign(nt, 19), 0.0, 0.005, grid);
      for (const auto& pt : curve)
        csv.add_row({std::to_string(nt), cli::csv_number(pt.delta),
                     cli::csv_number(pt.p_l),
                     cli::csv_number(pt.running_max)});
    }
    cli::atomic_write(out_dir + "/fig1_curve.csv", csv.dump());
  });

  run_item("fig2_expectation.csv", [&] {
    CsvTable csv;
    csv.config_line = "command=reproduce " + base_cfg;
    csv.header = {"delta0", "p_t", "p_c", "n", "mean", "std_error",
                  "degenerate_draws", "n_sims", "seed"};
    for (double d0 : {0.0, 0.1, 0.2}) {
      for (double pt : {0.3, 0.5, 0.7}) {
        for (double pcv : {0.3, 0.5, 0.7}) {
          for (int n = 10; n <= 640; n *= 2) {
            TrialDesign d(n, n);
            const auto r =
                ec_expectation(d, pt, pcv, Margin(d0), nsims,
                               static_cast<std::uint64_t>(seed), grid,
                               opts.threads);
            csv.add_row({cli::csv_number(d0), cli::csv_number(pt),
                         cli::csv_number(pcv), std::to_string(n),
                         cli::csv_number(r.mean),
                         cli::csv_number(r.std_error),
                         std::to_string(r.degenerate_draws),
                         std::to_string(r.n_sims), std::to_string(seed)});
          }
        }
      }
    }
    cli::atomic_write(out_dir + "/fig2_expectation.csv", csv.dump());
  });

  JsonDoc manifest;
  manifest.set("config", "command", JsonValue::of(std::string("reproduce")));
  manifest.set("config", "out", JsonValue::of(out_dir));
  manifest.set("config", "grid_pt", JsonValue::of(opts.grid_pt));
  manifest.set("config", "grid_delta", JsonValue::of(opts.grid_delta));
  manifest.set("config", "nsims", JsonValue::of(nsims));
  manifest.set("config", "seed", JsonValue::of(seed));
  manifest.set("config", "threads", JsonValue::of(opts.threads));
  bool any_failed = false;
  for (const auto& [file, st] : status) {
    manifest.set("files", file, JsonValue::of(st));
    any_failed = any_failed || st != "ok";
  }
  cli::atomic_write(out_dir + "/manifest.json", manifest.dump());
  for (const auto& [file, st] : status)
    std::printf("%-24s %s\n", file.c_str(), st.c_str());
  return any_failed ? 1 : 0;
}

// ---------------------------------------------------------------- verify --

int cmd_verify(int cases, long long seed, const CommonOpts& opts) {
  const GridConfig grid = grid_of(opts);
  bool ok = true;

  const auto rmle_rep =
      oracle::verify_rmle(cases, static_cast<std::uint64_t>(seed));
  const bool rmle_ok = rmle_rep.max_abs_deviation < 1e-6;
  ok = ok && rmle_ok;
  std::printf("%-4s %-16s cases=%-5d max_abs_dev=%.3e (tol 1e-6)\n",
              rmle_ok ? "ok" : "FAIL", rmle_rep.target.c_str(), rmle_rep.cases,
              rmle_rep.max_abs_deviation);

  const ExampleSpec designs[3] = {{"example1", 5, 8, 10, 19, 0.10, 0.5},
                                  {"example2", 5, 6, 2, 6, 0.12, 0.05},
                                  {"example3", 7, 18, 5, 25, 0.10, 0.05}};
  for (const auto& e : designs) {
    TrialDesign d(e.nt, e.nc);
    Margin m(e.delta0);
    for (const char* name : {"ec", "cz", "mn", "wald"}) {
      const auto region =
          critical_region(d, m, e.alpha, parse_method(name), grid);
      const auto rep = oracle::verify_maxsize(region);
      const bool this_ok = rep.max_abs_deviation < 1e-3;
      ok = ok && this_ok;
      std::printf("%-4s maximal_size %s/%-4s max_abs_dev=%.3e (tol 1e-3)\n",
                  this_ok ? "ok" : "FAIL", e.name.c_str(), name,
                  rep.max_abs_deviation);
    }
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and asymptotic inference on the risk difference of "
               "two binomial proportions"};
  app.require_subcommand(1);

  CommonOpts opts;
  app.add_option("--grid-pt", opts.grid_pt,
                 "P_T grid points per nuisance maximization")
      ->capture_default_str();
  app.add_option("--grid-delta", opts.grid_delta,
                 "delta grid step for CZ scans")
      ->capture_default_str();
  app.add_option("--threads", opts.threads, "worker threads")
      ->capture_default_str();
  app.add_option("--format", opts.format, "output format: json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", opts.out, "output path (prefix for opchar)");

  int xt = 0, nt = 0, xc = 0, nc = 0;
  double delta0 = 0.0, alpha = 0.05, pt = 0.5, pc = 0.5;
  int nsims = 10000, cases = 1000;
  long long seed = 1;
  std::vector<std::string> methods;
  std::string out_dir = "paper_data";

  auto* pv = app.add_subcommand("pvalue", "p-values for one observed table");
  pv->add_option("--xt", xt)->required();
  pv->add_option("--nt", nt)->required();
  pv->add_option("--xc", xc)->required();
  pv->add_option("--nc", nc)->required();
  pv->add_option("--delta0", delta0)->required();

  auto* ci = app.add_subcommand("ci", "confidence intervals");
  ci->add_option("--xt", xt)->required();
  ci->add_option("--nt", nt)->required();
  ci->add_option("--xc", xc)->required();
  ci->add_option("--nc", nc)->required();
  ci->add_option("--alpha", alpha)->required();
  auto* ci_d0 = ci->add_option("--delta0", delta0, "margin (ec only)");
  ci->add_option("--method", methods, "subset of wald,mn,cz,ec");

  auto* oc = app.add_subcommand("opchar", "operating characteristics");
  oc->require_subcommand(1);
  auto* mx = oc->add_subcommand("maxsize", "maximal size over the null");
  mx->add_option("--nt", nt)->required();
  mx->add_option("--nc", nc)->required();
  mx->add_option("--delta0", delta0)->required();
  mx->add_option("--alpha", alpha)->required();
  mx->add_option("--method", methods, "subset of wald,mn,cz,ec");

  auto* pw = oc->add_subcommand("power", "reject probability across delta");
  pw->add_option("--nt", nt)->required();
  pw->add_option("--nc", nc)->required();
  pw->add_option("--delta0", delta0)->required();
  pw->add_option("--alpha", alpha)->required();
  pw->add_option("--pt", pt)->required();

  auto* ee = oc->add_subcommand("ec-expectation",
                                "Monte Carlo mean of the correction term");
  ee->add_option("--nt", nt)->required();
  ee->add_option("--nc", nc)->required();
  ee->add_option("--delta0", delta0)->required();
  ee->add_option("--pt", pt)->required();
  ee->add_option("--pc", pc)->required();
  ee->add_option("--nsims", nsims)->capture_default_str();
  ee->add_option("--seed", seed)->capture_default_str();

  auto* rp = app.add_subcommand("reproduce",
                                "regenerate the numeric artifacts");
  rp->add_option("--out", out_dir, "output directory")->capture_default_str();
  rp->add_option("--nsims", nsims)->capture_default_str();
  rp->add_option("--seed", seed)->capture_default_str();

  auto* vf = app.add_subcommand("verify", "oracle cross-checks");
  vf->add_option("--cases", cases)->capture_default_str();
  vf->add_option("--seed", seed)->capture_default_str();

  for (auto* sub : {pv, ci, oc, mx, pw, ee, rp, vf}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (pv->parsed()) return cmd_pvalue(xt, nt, xc, nc, delta0, opts);
    if (ci->parsed())
      return cmd_ci(xt, nt, xc, nc, alpha, delta0, ci_d0->count() > 0,
                    methods, opts);
    if (mx->parsed()) return cmd_maxsize(nt, nc, delta0, alpha, methods, opts);
    if (pw->parsed()) return cmd_power(nt, nc, delta0, alpha, pt, opts);
    if (ee->parsed())
      return cmd_ec_expectation(nt, nc, delta0, pt, pc, nsims, seed, opts);
    if (rp->parsed()) return cmd_reproduce(out_dir, nsims, seed, opts);
    if (vf->parsed()) return cmd_verify(cases, seed, opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
