// SPDX-License-Identifier: Apache-2.0
//
// Times the OpenMP kernels against the serial reference at training-like
// problem sizes and verifies they agree bitwise.
#include <chrono>
#include <cstring>
#include <iomanip>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "mude/kernels.hpp"
#include "mude/rng.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Case {
  const char* name;
  int64_t batch, m, k, n;
};

void fill(std::vector<double>& v, mude::Rng& rng) {
  for (auto& x : v) x = rng.next_symmetric(1.0);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kernel benchmark: serial reference vs OpenMP"};
  int threads = mude::kernels::default_threads();
  int repeats = 5;
  app.add_option("--threads", threads, "threads for the parallel variant");
  app.add_option("--repeats", repeats, "repetitions per case");
  CLI11_PARSE(app, argc, argv);

  const Case cases[] = {
      {"matmul 672x256 * 256x1024", 1, 672, 256, 1024},
      {"matmul 672x64 * 64x256", 1, 672, 64, 256},
      {"bmm 640 x (12x16 * 16x12)", 640, 12, 16, 12},
      {"bmm 640 x (12x12 * 12x16)", 640, 12, 12, 16},
  };

  std::cout << std::left << std::setw(30) << "case" << std::right << std::setw(14)
            << "serial GF/s" << std::setw(14) << "omp GF/s" << std::setw(10) << "speedup"
            << std::setw(9) << "match\n";

  mude::Rng rng(1234);
  for (const Case& c : cases) {
    std::vector<double> a(static_cast<size_t>(c.batch * c.m * c.k));
    std::vector<double> b(static_cast<size_t>(c.batch * c.k * c.n));
    std::vector<double> out_serial(static_cast<size_t>(c.batch * c.m * c.n));
    std::vector<double> out_omp(out_serial.size());
    fill(a, rng);
    fill(b, rng);

    const double flops = 2.0 * static_cast<double>(c.batch * c.m * c.k * c.n);
    double serial_best = 0.0, omp_best = 0.0;
    for (int r = 0; r < repeats; ++r) {
      auto t0 = Clock::now();
      mude::kernels::serial::bmm(a.data(), b.data(), out_serial.data(), c.batch, c.m, c.k, c.n,
                                 false);
      serial_best = std::max(serial_best, flops / seconds_since(t0) / 1e9);
    }
    mude::kernels::set_threads(threads);
    for (int r = 0; r < repeats; ++r) {
      auto t0 = Clock::now();
      mude::kernels::bmm(a.data(), b.data(), out_omp.data(), c.batch, c.m, c.k, c.n, false);
      omp_best = std::max(omp_best, flops / seconds_since(t0) / 1e9);
    }
    const bool match =
        std::memcmp(out_serial.data(), out_omp.data(), out_serial.size() * sizeof(double)) == 0;

    std::cout << std::left << std::setw(30) << c.name << std::right << std::fixed
              << std::setprecision(2) << std::setw(13) << serial_best << std::setw(14) << omp_best
              << std::setw(10) << omp_best / serial_best << std::setw(8)
              << (match ? "yes" : "NO") << "\n";
    if (!match) return 1;
  }
  std::cout << "(threads: " << threads << ")\n";
  return 0;
}
