#include "bhlab/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>

#include "bhlab/error.hpp"

namespace bhlab {

namespace {
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

void* fft_alloc(std::size_t bytes) { return fftw_malloc(bytes); }
void fft_free(void* p) noexcept { fftw_free(p); }

FftPlan::FftPlan(std::size_t n) : n_(n) {
    RealVec r(n);
    ComplexVec c(n / 2 + 1);
    auto* cr = reinterpret_cast<fftw_complex*>(c.data());
    r2c_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), r.data(), cr, FFTW_ESTIMATE);
    c2r_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), cr, r.data(), FFTW_ESTIMATE);
    if (!r2c_ || !c2r_) fail(ErrorCode::InvalidArgument, "fftw could not plan size " + std::to_string(n));
}

FftPlan::~FftPlan() {
    std::lock_guard lock(planner_mutex());
    if (r2c_) fftw_destroy_plan(static_cast<fftw_plan>(r2c_));
    if (c2r_) fftw_destroy_plan(static_cast<fftw_plan>(c2r_));
}

std::shared_ptr<const FftPlan> FftPlan::get(std::size_t n) {
    std::lock_guard lock(planner_mutex());
    static std::map<std::size_t, std::shared_ptr<const FftPlan>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::shared_ptr<const FftPlan> p(new FftPlan(n));
    cache.emplace(n, p);
    return p;
}

void FftPlan::forward(const double* in, cplx* out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(r2c_), const_cast<double*>(in),
                         reinterpret_cast<fftw_complex*>(out));
}

void FftPlan::inverse(cplx* in, double* out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(c2r_), reinterpret_cast<fftw_complex*>(in), out);
}

ComplexVec forward_normalized(const double* values, std::size_t n) {
    auto plan = FftPlan::get(n);
    RealVec in(values, values + n);
    ComplexVec out(n / 2 + 1);
    plan->forward(in.data(), out.data());
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& c : out) c *= scale;
    return out;
}

RealVec inverse_normalized(const ComplexVec& coeffs, std::size_t n) {
    auto plan = FftPlan::get(n);
    ComplexVec tmp(coeffs);
    RealVec out(n);
    plan->inverse(tmp.data(), out.data());
    return out;
}

}  // namespace bhlab
