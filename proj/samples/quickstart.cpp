// Builds uniform and adaptive piecewise approximants of a function with a
// jump at -0.4 and a kink at 0.4, then prints errors at a few points.

#include <cmath>
#include <cstdio>

#include "pipct/pipct.hpp"

int main() {
  using namespace pipct;
  auto f = [](double x) {
    if (x < -0.4) return x * x * x;
    if (x < 0.4) return x * x + 1.0;
    return 1.16 - std::sqrt(x - 0.4);
  };
  const Interval domain(-1.0, 1.0);

  const auto partition = uniform_partition(domain, 64);
  const auto uniform = build_pipct(f, partition, uniform_plan(partition.cells(), 20, 20), 200);

  AdaptiveParams params;
  params.badcell.n = 100;
  const auto adaptive = build_apipct(f, domain, params, 100);

  std::printf("adaptive cells: %zu (%s)\n", adaptive.trace.final_partition.cells(),
              adaptive.trace.stop_reason.c_str());
  for (double x : {-0.9, -0.401, -0.399, 0.0, 0.399, 0.401, 0.9}) {
    const double eu = std::abs(evaluate_piecewise(uniform.approximant, x) - f(x));
    const double ea = std::abs(evaluate_piecewise(adaptive.approximant(), x) - f(x));
    std::printf("x = %+.3f  uniform %.2e  adaptive %.2e\n", x, eu, ea);
  }

  const auto& cells = adaptive.trace.final_partition;
  const std::size_t j = cells.locate(-0.4);
  const auto poles = classify_froissart(adaptive.approximant().pieces[j].value(),
                                        default_residue_tolerance(f, cells.cell(j), 100),
                                        kDefaultPairTolerance, j);
  std::size_t spurious = 0;
  for (const auto& pole : poles.poles) spurious += pole.spurious;
  std::printf("cell %zu at the jump: %zu poles, %zu spurious\n", j, poles.poles.size(), spurious);
}
