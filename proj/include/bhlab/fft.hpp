#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <new>
#include <vector>

namespace bhlab {

// Allocator backed by fftw_malloc so every buffer shares the SIMD alignment
// the cached plans were created with (required by the new-array execute API).
void* fft_alloc(std::size_t bytes);
void fft_free(void* p) noexcept;

template <class T>
struct FftAllocator {
    using value_type = T;
    FftAllocator() = default;
    template <class U>
    FftAllocator(const FftAllocator<U>&) noexcept {}

    T* allocate(std::size_t n) {
        if (n == 0) return nullptr;
        void* p = fft_alloc(n * sizeof(T));
        if (!p) throw std::bad_alloc();
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept { fft_free(p); }

    template <class U>
    bool operator==(const FftAllocator<U>&) const noexcept { return true; }
};

using cplx = std::complex<double>;
using RealVec = std::vector<double, FftAllocator<double>>;
using ComplexVec = std::vector<cplx, FftAllocator<cplx>>;

// Real-to-complex plan pair for one transform size. Plans are built once with
// FFTW_ESTIMATE (deterministic, no timing-dependent algorithm choice) and then
// shared; executing a plan is thread safe, creating one is serialized.
class FftPlan {
public:
    static std::shared_ptr<const FftPlan> get(std::size_t n);

    ~FftPlan();
    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    std::size_t size() const { return n_; }

    // Unnormalized forward transform, n reals -> n/2+1 coefficients. Input untouched.
    void forward(const double* in, cplx* out) const;
    // Unnormalized inverse transform. Destroys `in`.
    void inverse(cplx* in, double* out) const;

private:
    explicit FftPlan(std::size_t n);
    std::size_t n_;
    void* r2c_ = nullptr;
    void* c2r_ = nullptr;
};

// Normalized helpers: coefficients c_j with f(x_k) = sum_j c_j e^{i k_j (x_k - x_min)}
// (real-signal half spectrum, j = 0..n/2).
ComplexVec forward_normalized(const double* values, std::size_t n);
RealVec inverse_normalized(const ComplexVec& coeffs, std::size_t n);

}  // namespace bhlab
