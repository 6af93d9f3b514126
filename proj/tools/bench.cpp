// Timing harness for the parallel kernels against their serial references:
// the parameter-pair sweep and the per-prime valuation scans.

#include "hyp/rational_density.hpp"
#include "hyp/schwarz.hpp"

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

namespace {

double time_sweep(int height, bool parallel, int workers, std::size_t* records) {
  hyp::SearchConfig config;
  config.max_height = height;
  config.threshold = hyp::Rational(1, 4);
  config.worker_count = workers;
  const double start = omp_get_wtime();
  const auto result = parallel ? hyp::sweep(config) : hyp::sweep_serial(config);
  const double elapsed = omp_get_wtime() - start;
  *records = result.size();
  return elapsed;
}

double time_scans(long prime_max, unsigned long kmax, bool parallel, int workers,
                  long* checksum) {
  const hyp::HypergeomParams params(
      {hyp::Rational(1, 5), hyp::Rational(2, 5), hyp::Rational(3, 5)},
      {hyp::Rational(4, 5), hyp::Rational(1, 2)});
  std::vector<long> primes;
  for (long p : hyp::primes_up_to(prime_max))
    if (hyp::is_good_prime(params, p) && p > hyp::good_prime_bound(params).threshold)
      primes.push_back(p);
  std::vector<long> mins(primes.size());
  const double start = omp_get_wtime();
  const int threads = parallel ? (workers > 0 ? workers : omp_get_max_threads()) : 1;
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(primes.size()); ++i) {
    const hyp::RationalTermValuation engine(params, primes[static_cast<std::size_t>(i)]);
    mins[static_cast<std::size_t>(i)] = hyp::min_valuation_scan(engine, kmax).min_value;
  }
  const double elapsed = omp_get_wtime() - start;
  long sum = 0;
  for (long m : mins) sum += m;
  *checksum = sum;
  return elapsed;
}

}  // namespace

int main(int argc, char** argv) {
  int height = 24;
  long prime_max = 400;
  unsigned long kmax = 2000;
  int workers = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--max-height" && i + 1 < argc)
      height = std::atoi(argv[++i]);
    else if (arg == "--prime-max" && i + 1 < argc)
      prime_max = std::atol(argv[++i]);
    else if (arg == "--kmax" && i + 1 < argc)
      kmax = std::strtoul(argv[++i], nullptr, 10);
    else if (arg == "--workers" && i + 1 < argc)
      workers = std::atoi(argv[++i]);
    else {
      std::fprintf(stderr,
                   "usage: hypbench [--max-height H] [--prime-max P] [--kmax K] "
                   "[--workers N]\n");
      return 2;
    }
  }

  const int threads = workers > 0 ? workers : omp_get_max_threads();
  std::printf("threads: %d\n\n", threads);

  std::size_t n_serial = 0, n_parallel = 0;
  const double sweep_serial_s = time_sweep(height, false, workers, &n_serial);
  const double sweep_parallel_s = time_sweep(height, true, workers, &n_parallel);
  std::printf("sweep height %-3d        serial %8.3fs   parallel %8.3fs   speedup %5.2fx   (%zu records%s)\n",
              height, sweep_serial_s, sweep_parallel_s, sweep_serial_s / sweep_parallel_s,
              n_parallel, n_serial == n_parallel ? "" : " MISMATCH");

  long sum_serial = 0, sum_parallel = 0;
  const double scan_serial_s = time_scans(prime_max, kmax, false, workers, &sum_serial);
  const double scan_parallel_s = time_scans(prime_max, kmax, true, workers, &sum_parallel);
  std::printf("valuation scans p<=%-4ld serial %8.3fs   parallel %8.3fs   speedup %5.2fx   (checksum %ld%s)\n",
              prime_max, scan_serial_s, scan_parallel_s, scan_serial_s / scan_parallel_s,
              sum_parallel, sum_serial == sum_parallel ? "" : " MISMATCH");
  return 0;
}
