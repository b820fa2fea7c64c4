// Benchmark comparing the serial reference lane against the OpenMP lane for
// the batch trajectory kernel and for a full protocol session. Also verifies
// that both lanes produce identical results, which the parallel design
// guarantees by construction. Usage: bench [n_states] [n_rounds] [threads]
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qkdsim/analysis.hpp"
#include "qkdsim/sampling.hpp"
#include "qkdsim/session.hpp"

using namespace qkdsim;

namespace {

template <typename Fn>
double seconds(const Fn& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

void report_line(const char* name, std::size_t n, double t_serial, double t_parallel,
                 bool identical) {
  std::printf("%-16s n=%-8zu serial %8.3f s   parallel %8.3f s   speedup %5.2fx   identical: %s\n",
              name, n, t_serial, t_parallel, t_serial / t_parallel, identical ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n_states = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 50000;
  const std::size_t n_rounds = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20000;
  const int threads = argc > 3 ? std::atoi(argv[3]) : 0;

#ifdef _OPENMP
  std::printf("openmp enabled, %d threads available\n",
              threads > 0 ? threads : omp_get_max_threads());
#else
  std::printf("openmp disabled: the parallel lane falls back to serial\n");
#endif

  bool all_identical = true;

  {
    const PhysicalParams physics{};
    const IntegratorConfig integrator{};
    const Kappa kappa{100.0, +1};
    const std::vector<HiddenState> states =
        sample_equilibrium(n_states, physics, {12345, StreamLabel::KeyRoundPhysics});

    std::vector<PairOutcome> serial, parallel;
    const double t_serial =
        seconds([&] { serial = integrate_batch_serial(states, kappa, physics, integrator); });
    const double t_parallel = seconds(
        [&] { parallel = integrate_batch_parallel(states, kappa, physics, integrator, threads); });

    bool identical = serial.size() == parallel.size();
    for (std::size_t i = 0; identical && i < serial.size(); ++i)
      identical = serial[i].alice == parallel[i].alice && serial[i].bob == parallel[i].bob &&
                  serial[i].committed == parallel[i].committed;
    all_identical = all_identical && identical;
    report_line("batch integrate", n_states, t_serial, t_parallel, identical);
  }

  {
    RunSpec spec;
    spec.session.n_rounds = n_rounds;
    spec.session.seed = 42;
    spec.adversary = AdversaryModel::HiddenVariable;

    std::string serial_report, parallel_report;
    const double t_serial = seconds([&] {
      serial_report = report_to_json(run_session(spec, ExecutionMode::Serial).report);
    });
    const double t_parallel = seconds([&] {
      parallel_report = report_to_json(run_session(spec, ExecutionMode::Parallel, threads).report);
    });

    const bool identical = serial_report == parallel_report;  // byte-for-byte
    all_identical = all_identical && identical;
    report_line("full session", n_rounds, t_serial, t_parallel, identical);
  }

  return all_identical ? 0 : 1;
}
