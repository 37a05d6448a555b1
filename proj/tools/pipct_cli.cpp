// pipct: command-line front end for the experiment runners.
//
//   pipct <experiment> [--config file.json] [--N 8,32] [--n 200] [--np 20]
//         [--nq 20] [--eps 1e-2] [--tau 0.00390625] [--m 20] [--out file.csv]
//         [--trace trace.json] [--approximant approx.json] [--print-config]
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pipct/config.hpp"
#include "pipct/error.hpp"
#include "pipct/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Overrides {
  std::string config_path;
  std::vector<int> N;
  std::optional<int> n, n_p, n_q, m;
  std::optional<double> eps, tau;
  std::string out, trace, approximant;
  bool print_config = false;
};

void add_options(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config_path, "JSON experiment config")->check(CLI::ExistingFile);
  sub->add_option("--N", o.N, "cell counts (comma separated or repeated)")->delimiter(',');
  sub->add_option("--n", o.n, "Chebyshev nodes per cell");
  sub->add_option("--np", o.n_p, "numerator degree");
  sub->add_option("--nq", o.n_q, "denominator degree");
  sub->add_option("--eps", o.eps, "badcell threshold epsilon");
  sub->add_option("--tau", o.tau, "adaptive minimum cell width");
  sub->add_option("--m", o.m, "badcell probe degree");
  sub->add_option("--out", o.out, "CSV output path (default stdout)");
  sub->add_option("--trace", o.trace, "refinement trace JSON path (adaptive)");
  sub->add_option("--approximant", o.approximant, "approximant JSON path (adaptive)");
  sub->add_flag("--print-config", o.print_config, "print the effective config and exit");
}

pipct::ExperimentConfig effective_config(const std::string& experiment, const Overrides& o) {
  auto c = o.config_path.empty() ? pipct::default_config(experiment)
                                 : pipct::load_config(o.config_path);
  if (c.experiment != experiment) {
    throw pipct::ConfigError("config is for '" + c.experiment + "', not '" + experiment + "'");
  }
  if (!o.N.empty()) c.N = o.N;
  if (o.n) c.n = *o.n;
  if (o.n_p) c.n_p = *o.n_p;
  if (o.n_q) c.n_q = *o.n_q;
  if (o.m) c.adaptive.badcell.m = *o.m;
  if (o.eps) c.adaptive.badcell.epsilon = *o.eps;
  if (o.tau) c.adaptive.tau = *o.tau;
  if (!o.out.empty()) c.output.csv = o.out;
  if (!o.trace.empty()) c.output.trace = o.trace;
  if (!o.approximant.empty()) c.output.approximant = o.approximant;
  c.validate();
  return c;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw pipct::ConfigError("cannot write '" + path + "'");
  out << text;
}

int run(const std::string& experiment, const Overrides& o) {
  const auto c = effective_config(experiment, o);
  if (o.print_config) {
    std::cout << pipct::emit_config(c).dump(2) << '\n';
    return 0;
  }
  const auto result = pipct::run_experiment(c);
  const std::string csv = pipct::to_csv_string(result.table);
  if (c.output.csv.empty()) {
    std::cout << csv;
  } else {
    write_file(c.output.csv, csv);
  }
  if (result.trace && !c.output.trace.empty()) write_file(c.output.trace, result.trace->dump(2) + "\n");
  if (result.approximant && !c.output.approximant.empty()) {
    write_file(c.output.approximant, result.approximant->dump() + "\n");
  }
  for (const auto& note : result.notes) std::cerr << note << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Piecewise Pade-Chebyshev approximation experiments"};
  app.require_subcommand(1);
  Overrides overrides;
  std::string chosen;
  for (const auto& name : pipct::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    add_options(sub, overrides);
    sub->callback([&chosen, name] { chosen = name; });
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }
  try {
    return run(chosen, overrides);
  } catch (const pipct::EvaluationError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const pipct::PoleError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const pipct::InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}
