#include "toepfun/experiment.hpp"
#include "toepfun/io.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using nlohmann::json;
using namespace toepfun;

// "ex1", an inline trigpoly object, or @path to a JSON file.
json parse_symbol_arg(const std::string& text) {
  if (!text.empty() && text.front() == '@') {
    std::ifstream in(text.substr(1));
    if (!in) throw std::runtime_error("cannot open " + text.substr(1));
    return json::parse(in);
  }
  if (!text.empty() && text.front() == '{') return json::parse(text);
  return json(text);
}

template <typename T>
std::vector<T> split_list(const std::string& text, T (*convert)(const std::string&)) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(convert(item));
  }
  return out;
}

Eigen::Index to_index(const std::string& s) { return static_cast<Eigen::Index>(std::stoll(s)); }
SolverColumn to_column(const std::string& s) { return SolverColumn::parse(s); }

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toeplitz matrix functions with circulant preconditioning"};
  app.require_subcommand(1);

  std::string symbol = "ex1";
  std::string g = "exp";
  std::string sizes = "128,256,512,1024";
  std::string solvers = "cg,cg+c";
  std::uint64_t seed = kDefaultSeed;
  double tol = 1e-7;
  int max_iter = 100000;
  std::string out;

  auto* table = app.add_subcommand("table", "Iteration-count table for g(A_n[f]) x = b");
  table->add_option("--symbol", symbol, "catalog name (ex1..ex5b), inline trigpoly JSON, or @file.json");
  table->add_option("--g", g, "exp, sin or cos");
  table->add_option("--sizes", sizes, "comma-separated sizes");
  table->add_option("--solvers", solvers, "comma-separated columns, e.g. cg,cg+c,minres+absc,gmres+c");
  table->add_option("--seed", seed, "seed for the random right-hand side");
  table->add_option("--tol", tol, "relative residual tolerance");
  table->add_option("--max-iter", max_iter, "iteration cap");
  table->add_option("--out", out, "write the JSON result here");

  Eigen::Index n = 512;
  std::string variant = "preconditioned";
  std::string report_path;
  auto* spec = app.add_subcommand("spectrum", "Eigenvalue cloud of g(A) or a preconditioned variant");
  spec->add_option("--symbol", symbol, "catalog name, inline trigpoly JSON, or @file.json");
  spec->add_option("--g", g, "exp, sin or cos");
  spec->add_option("--n", n, "matrix size");
  spec->add_option("--variant", variant, "raw, preconditioned, normal_eq or abs_preconditioned");
  spec->add_option("--out", out, "write re,im rows here (default stdout)");
  spec->add_option("--report", report_path, "write the cluster report JSON here");

  std::string verify_sizes = "64,128,256";
  bool trig_only = false;
  auto* verify = app.add_subcommand("verify", "Run the property checks over a size grid");
  verify->add_option("--sizes", verify_sizes, "comma-separated sizes");
  verify->add_flag("--trig-only", trig_only, "only trigonometric-polynomial symbols");
  verify->add_option("--seed", seed, "seed for random test matrices");
  verify->add_option("--out", out, "write the JSON summary here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*table) {
      SolverConfig cfg;
      cfg.tol = tol;
      cfg.max_iter = max_iter;
      const auto experiment = ExperimentSpec::make(parse_symbol_arg(symbol), function_kind_from_string(g),
                                                   split_list(sizes, to_index), split_list(solvers, to_column),
                                                   seed, cfg);
      const auto result = run_table(experiment);
      std::cout << result.to_text();
      if (!out.empty()) write_file(out, result.to_json().dump(2) + "\n");
      return 0;
    }
    if (*spec) {
      const auto f = io::symbol_from_json(parse_symbol_arg(symbol));
      const auto run = run_spectrum(f, function_kind_from_string(g), n, spectrum_variant_from_string(variant));
      std::ostringstream csv;
      io::write_points_csv(csv, run.eigenvalues);
      if (out.empty()) std::cout << csv.str();
      else write_file(out, csv.str());
      if (run.report) {
        std::cerr << "outliers (|z - 1| > 0.1): " << run.report->outlier_count << " of " << n << "\n";
        if (!report_path.empty()) {
          json j = io::to_json(*run.report);
          j["pm_one_fraction"] = run.pm_one_fraction;
          write_file(report_path, j.dump(2) + "\n");
        }
      }
      std::cerr << "fraction within 0.05 of +-1: " << run.pm_one_fraction << "\n";
      return 0;
    }
    if (*verify) {
      VerificationOptions options;
      options.include_catalog = !trig_only;
      options.seed = seed;
      const auto report = run_verification_suite(split_list(verify_sizes, to_index), options);
      for (const auto& c : report.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << c.detail << "\n";
      }
      const json j = report.to_json();
      std::cout << j["total"].get<std::size_t>() - j["failed"].get<std::size_t>() << "/" << j["total"] << " passed\n";
      if (!out.empty()) write_file(out, j.dump(2) + "\n");
      return report.all_passed() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "toepfun: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
