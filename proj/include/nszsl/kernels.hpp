#pragma once

#include <cstddef>
#include <string_view>

namespace nszsl::kernels {

// Dispatch table for the level-1 kernels every dense operation in this
// project is built from. The scalar versions are the reference
// implementation; SIMD variants may differ from them only by floating-point
// reassociation (different summation order), never in which values they
// combine.
struct Ops {
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i a[i]^2
  double (*sumsq)(const double* a, std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // x[i] *= alpha
  void (*scale)(double alpha, double* x, std::size_t n);
  // out[i] += a[i] * b[i]
  void (*mul_acc)(const double* a, const double* b, double* out,
                  std::size_t n);
};

enum class Backend { scalar, avx2 };

// Kernel table for an explicit backend (equivalence tests use this to pin
// both sides). Throws if the backend is not compiled in / not supported by
// the CPU.
const Ops& ops(Backend backend);

bool backend_available(Backend backend);
std::string_view backend_name(Backend backend);

// Active table. Selected once at first use: the NSZSL_KERNELS environment
// variable ("scalar" or "avx2") wins, otherwise the best backend the CPU
// supports.
const Ops& active();
Backend active_backend();

// Override the runtime selection (tests / benchmarking).
void select_backend(Backend backend);

}  // namespace nszsl::kernels
