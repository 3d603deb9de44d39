#include "nszsl/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

#include "nszsl/errors.hpp"

namespace nszsl::kernels {

namespace detail {

double dot_scalar(const double*, const double*, std::size_t);
double sumsq_scalar(const double*, std::size_t);
void axpy_scalar(double, const double*, double*, std::size_t);
void scale_scalar(double, double*, std::size_t);
void mul_acc_scalar(const double*, const double*, double*, std::size_t);

#if defined(__x86_64__) || defined(__i386__)
double dot_avx2(const double*, const double*, std::size_t);
double sumsq_avx2(const double*, std::size_t);
void axpy_avx2(double, const double*, double*, std::size_t);
void scale_avx2(double, double*, std::size_t);
void mul_acc_avx2(const double*, const double*, double*, std::size_t);
#endif

}  // namespace detail

namespace {

constexpr Ops kScalarOps{detail::dot_scalar, detail::sumsq_scalar,
                         detail::axpy_scalar, detail::scale_scalar,
                         detail::mul_acc_scalar};

#if defined(__x86_64__) || defined(__i386__)
constexpr Ops kAvx2Ops{detail::dot_avx2, detail::sumsq_avx2,
                       detail::axpy_avx2, detail::scale_avx2,
                       detail::mul_acc_avx2};
#endif

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect_backend() {
  if (const char* env = std::getenv("NSZSL_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Backend::avx2;
    return Backend::scalar;
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& selected() {
  static std::atomic<Backend> backend{detect_backend()};
  return backend;
}

}  // namespace

bool backend_available(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return cpu_has_avx2();
  }
  return false;
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return "scalar";
    case Backend::avx2:
      return "avx2";
  }
  return "unknown";
}

const Ops& ops(Backend backend) {
  switch (backend) {
    case Backend::scalar:
      return kScalarOps;
    case Backend::avx2:
#if defined(__x86_64__) || defined(__i386__)
      if (cpu_has_avx2()) return kAvx2Ops;
#endif
      throw Error("UnsupportedBackend", "avx2 kernels not supported on this CPU");
  }
  throw Error("UnsupportedBackend", "unknown kernel backend");
}

const Ops& active() { return ops(selected().load(std::memory_order_relaxed)); }

Backend active_backend() { return selected().load(std::memory_order_relaxed); }

void select_backend(Backend backend) {
  ops(backend);  // validates availability
  selected().store(backend, std::memory_order_relaxed);
}

}  // namespace nszsl::kernels
