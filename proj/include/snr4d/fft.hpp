#pragma once

#include <fftw3.h>

#include <complex>
#include <cstring>
#include <map>
#include <mutex>
#include <new>

namespace snr4d {

// FFTW-aligned complex buffer so cached plans can be executed on any of them.
class ComplexBuffer {
 public:
  ComplexBuffer() = default;
  explicit ComplexBuffer(std::size_t n) : n_(n) {
    if (n_ == 0) return;
    data_ = static_cast<std::complex<double>*>(fftw_malloc(n_ * sizeof(std::complex<double>)));
    if (!data_) throw std::bad_alloc();
    std::memset(static_cast<void*>(data_), 0, n_ * sizeof(std::complex<double>));
  }
  ComplexBuffer(const ComplexBuffer& other) : ComplexBuffer(other.n_) {
    if (n_) std::memcpy(static_cast<void*>(data_), other.data_, n_ * sizeof(std::complex<double>));
  }
  ComplexBuffer& operator=(const ComplexBuffer& other) {
    if (this != &other) {
      ComplexBuffer tmp(other);
      swap(tmp);
    }
    return *this;
  }
  ComplexBuffer(ComplexBuffer&& other) noexcept { swap(other); }
  ComplexBuffer& operator=(ComplexBuffer&& other) noexcept {
    swap(other);
    return *this;
  }
  ~ComplexBuffer() {
    if (data_) fftw_free(data_);
  }

  void swap(ComplexBuffer& other) noexcept {
    std::swap(n_, other.n_);
    std::swap(data_, other.data_);
  }

  std::size_t size() const noexcept { return n_; }
  std::complex<double>* data() noexcept { return data_; }
  const std::complex<double>* data() const noexcept { return data_; }
  std::complex<double>& operator[](std::size_t i) noexcept { return data_[i]; }
  const std::complex<double>& operator[](std::size_t i) const noexcept { return data_[i]; }

 private:
  std::size_t n_ = 0;
  std::complex<double>* data_ = nullptr;
};

// In-place c2c transform batched over the two polarizations (pol X in
// [0, n), pol Y in [n, 2n) of one contiguous buffer). Plans are created with
// FFTW_ESTIMATE — planning is then deterministic, which keeps reruns
// bit-identical — and cached per length for the process lifetime. Transforms
// are unnormalized.
class DualPolFft {
 public:
  explicit DualPolFft(std::size_t n) : n_(n), plans_(plans_for(n)) {}

  std::size_t size() const noexcept { return n_; }

  void forward(std::complex<double>* xy) const {
    fftw_execute_dft(plans_.fwd, reinterpret_cast<fftw_complex*>(xy),
                     reinterpret_cast<fftw_complex*>(xy));
  }
  void backward(std::complex<double>* xy) const {
    fftw_execute_dft(plans_.bwd, reinterpret_cast<fftw_complex*>(xy),
                     reinterpret_cast<fftw_complex*>(xy));
  }

 private:
  struct Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
  };

  static const Plans& plans_for(std::size_t n) {
    static std::mutex mutex;
    static std::map<std::size_t, Plans> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    ComplexBuffer scratch(2 * n);
    auto* io = reinterpret_cast<fftw_complex*>(scratch.data());
    const int ni = static_cast<int>(n);
    Plans p;
    p.fwd = fftw_plan_many_dft(1, &ni, 2, io, nullptr, 1, ni, io, nullptr, 1, ni, FFTW_FORWARD,
                               FFTW_ESTIMATE);
    p.bwd = fftw_plan_many_dft(1, &ni, 2, io, nullptr, 1, ni, io, nullptr, 1, ni, FFTW_BACKWARD,
                               FFTW_ESTIMATE);
    return cache.emplace(n, p).first->second;
  }

  std::size_t n_;
  const Plans& plans_;
};

}  // namespace snr4d
