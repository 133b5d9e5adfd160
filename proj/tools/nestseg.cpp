// nestseg: nested community sequences around a source set.
//
//   nestseg run GRAPH [-k 3] [--source a,b | --source max-degree] [--scheme sum] ...
//   nestseg export GRAPH --format dot
//   nestseg compare GRAPH [--k-min 2] [--k-max 10]
//   nestseg verify --props density,left,right,pav,dp --seed 1
//
// Exit codes: 0 ok, 1 I/O / parse / bad input, 2 infeasible k.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nestseg/nestseg.hpp"

namespace {

struct GraphArgs {
  std::string input;
  std::vector<std::string> sources;
  std::size_t k = 3;
  std::string scheme = "sum";
  std::string order = "peel";
  std::string merge = "reject";
  double restart = 0.1;
  double tol = 1e-10;
  std::size_t max_iter = 10000;
  bool weighted_walk = false;
  std::string output;
};

void add_graph_options(CLI::App& cmd, GraphArgs& a, bool with_k) {
  cmd.add_option("graph", a.input, "edge list file (`-` for stdin)")->required();
  cmd.add_option("-s,--source", a.sources, "source vertex labels, or max-degree")->delimiter(',');
  if (with_k) cmd.add_option("-k", a.k, "number of communities")->check(CLI::PositiveNumber);
  cmd.add_option("--scheme", a.scheme, "edge weighting")->check(CLI::IsMember({"norm", "sum", "min", "original"}));
  if (with_k)
    cmd.add_option("--order", a.order, "vertex order")->check(CLI::IsMember({"peel", "degree", "pagerank", "hops"}));
  cmd.add_option("--merge-duplicates", a.merge, "duplicate edge policy")->check(CLI::IsMember({"reject", "sum"}));
  cmd.add_option("--restart", a.restart, "PageRank restart probability")->check(CLI::Range(0.0, 1.0));
  cmd.add_option("--tol", a.tol, "PageRank L1 tolerance")->check(CLI::PositiveNumber);
  cmd.add_option("--max-iter", a.max_iter, "PageRank iteration cap")->check(CLI::PositiveNumber);
  cmd.add_flag("--weighted-walk", a.weighted_walk, "walk proportionally to input edge weights");
  cmd.add_option("-o,--output", a.output, "output file (default stdout)");
}

nestseg::Graph read_graph(const GraphArgs& a) {
  const auto policy = a.merge == "sum" ? nestseg::DuplicatePolicy::sum : nestseg::DuplicatePolicy::reject;
  if (a.input == "-") return nestseg::load_edge_list(std::cin, policy);
  std::ifstream in(a.input);
  if (!in) throw nestseg::Error("cannot open '" + a.input + "'");
  try {
    return nestseg::load_edge_list(in, policy);
  } catch (const nestseg::ParseError& e) {
    throw nestseg::Error(a.input + ": " + e.what());
  }
}

nestseg::RunConfig make_config(const GraphArgs& a) {
  nestseg::RunConfig cfg;
  for (const auto& s : a.sources)
    if (s != "max-degree") cfg.sources.push_back(s);
  cfg.k = a.k;
  cfg.scheme = *nestseg::parse_scheme(a.scheme);
  cfg.order = *nestseg::parse_order_kind(a.order);
  cfg.pagerank.restart = a.restart;
  cfg.pagerank.tol = a.tol;
  cfg.pagerank.max_iter = a.max_iter;
  cfg.pagerank.use_edge_weights = a.weighted_walk;
  return cfg;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw nestseg::Error("cannot write '" + path + "'");
  out << text;
}

std::string render(const nestseg::RunResult& r, const std::string& format) {
  if (format == "dot") return nestseg::export_dot(r.graph, r.sequence);
  if (format == "tsv") return nestseg::export_tsv(r.graph, r.groups, r.sources.size());
  return nestseg::to_json(r.graph, r.sequence).dump(2) + "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nested community sequences around a source set"};
  app.require_subcommand(1);

  GraphArgs run_args;
  std::string run_format = "json";
  auto* run = app.add_subcommand("run", "discover k nested communities");
  add_graph_options(*run, run_args, true);
  run->add_option("--format", run_format, "output format")->check(CLI::IsMember({"json", "dot", "tsv"}));

  GraphArgs export_args;
  std::string export_format = "dot";
  auto* exp = app.add_subcommand("export", "render a discovered sequence (DOT by default)");
  add_graph_options(*exp, export_args, true);
  exp->add_option("--format", export_format, "output format")->check(CLI::IsMember({"json", "dot", "tsv"}));

  GraphArgs cmp_args;
  std::size_t k_min = 2;
  std::size_t k_max = 10;
  auto* cmp = app.add_subcommand("compare", "score peel against degree, PageRank and BFS-level baselines");
  add_graph_options(*cmp, cmp_args, false);
  cmp->add_option("--k-min", k_min)->check(CLI::PositiveNumber);
  cmp->add_option("--k-max", k_max)->check(CLI::PositiveNumber);

  std::vector<std::string> props = nestseg::known_properties();
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  auto* ver = app.add_subcommand("verify", "audit properties on random instances against exhaustive search");
  ver->add_option("--props", props, "comma-separated property names")->delimiter(',');
  ver->add_option("--seed", seed);
  ver->add_option("--trials", trials)->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (run->parsed() || exp->parsed()) {
      const auto& a = run->parsed() ? run_args : export_args;
      const auto result = nestseg::run_pipeline(read_graph(a), make_config(a));
      emit(a.output, render(result, run->parsed() ? run_format : export_format));
    } else if (cmp->parsed()) {
      const auto report = nestseg::compare_baselines(read_graph(cmp_args), make_config(cmp_args), k_min, k_max);
      emit(cmp_args.output, nestseg::to_json(report).dump(2) + "\n");
    } else {
      bool ok = true;
      for (const auto& r : nestseg::verify_properties(props, seed, trials)) {
        std::cout << r.name << ": instances=" << r.instances << " checks=" << r.checks
                  << " violations=" << r.violations << " skipped=" << r.skipped << " worst_margin=" << r.worst_margin
                  << '\n';
        ok = ok && r.ok();
      }
      return ok ? 0 : 1;
    }
  } catch (const nestseg::InfeasibleError& e) {
    std::cerr << "nestseg: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "nestseg: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
