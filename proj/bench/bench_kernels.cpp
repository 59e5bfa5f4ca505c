// Serial reference vs OpenMP kernel timings. Usage: bench_kernels [repeats]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <vector>

#include "rell/monodromy.hpp"
#include "rell/potential.hpp"

using namespace rell;

namespace {

double best_of(int repeats, const std::function<void()>& f) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void row(const char* name, double serial, double parallel, bool same) {
  std::printf("%-22s %12.4f %12.4f %8.2fx  %s\n", name, serial * 1e3, parallel * 1e3, serial / parallel,
              same ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  const int repeats = argc > 1 ? std::max(1, std::atoi(argv[1])) : 3;
  std::printf("threads: %d, best of %d\n", omp_get_max_threads(), repeats);
  std::printf("%-22s %12s %12s %9s\n", "kernel", "serial ms", "openmp ms", "speedup");

  std::vector<double> q2s;
  for (int i = 0; i < 200; ++i) q2s.push_back(2.1 + 3.9 * (i + 0.5) / 200);

  {
    std::vector<potential::OracleChainPoint> a;
    std::vector<potential::OracleChainPoint> b;
    const double s = best_of(repeats, [&] { a = potential::f1_oracle_chain_serial(q2s, 1e-14, 0.0); });
    const double p = best_of(repeats, [&] { b = potential::f1_oracle_chain(q2s, 1e-14, 0.0); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].finite_diff == b[i].finite_diff;
    row("f1_oracle_chain", s, p, same);
  }
  {
    std::vector<double> a;
    std::vector<double> b;
    const double s = best_of(repeats, [&] { a = potential::eval_J_axis_batch_serial(q2s, 1e-14); });
    const double p = best_of(repeats, [&] { b = potential::eval_J_axis_batch(q2s, 1e-14); });
    row("eval_J_axis_batch", s, p, a == b);
  }

  const auto eq = variational::limit_equation();
  monodromy::GeneratorSet ga;
  monodromy::GeneratorSet gb;
  {
    const double s = best_of(repeats, [&] { ga = monodromy::generators_serial(eq); });
    const double p = best_of(repeats, [&] { gb = monodromy::generators(eq); });
    bool same = ga.finite.size() == gb.finite.size();
    for (std::size_t i = 0; same && i < ga.finite.size(); ++i) same = ga.finite[i].entries == gb.finite[i].entries;
    row("generators", s, p, same);
  }
  {
    std::vector<monodromy::Matrix2> mats;
    for (const auto& m : ga.finite) mats.push_back(m.entries);
    double a = 0;
    double b = 0;
    const double s = best_of(repeats, [&] { a = monodromy::derived_power_test_serial(mats, 3, 120, 400, 12345); });
    const double p = best_of(repeats, [&] { b = monodromy::derived_power_test(mats, 3, 120, 400, 12345); });
    row("derived_power_test", s, p, a == b);
  }
  return 0;
}
