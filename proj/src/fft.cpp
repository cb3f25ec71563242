#include <lorasat/fft.hpp>

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace lorasat {

namespace {

// Plans are cached per size and kept for the process lifetime. FFTW plan
// creation is not thread-safe, so the cache is mutex-guarded; execution via
// fftw_execute_dft on a plan made with FFTW_UNALIGNED is thread-safe for any
// caller-supplied buffers.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

fftw_plan cached_plan(std::size_t n) {
    static std::map<std::size_t, fftw_plan> cache;
    std::lock_guard<std::mutex> lock(plan_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    fftw_complex* tmp_in = fftw_alloc_complex(n);
    fftw_complex* tmp_out = fftw_alloc_complex(n);
    if (!tmp_in || !tmp_out) throw std::bad_alloc();
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), tmp_in, tmp_out,
                                      FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(tmp_in);
    fftw_free(tmp_out);
    if (!plan) throw std::runtime_error("fftw_plan_dft_1d failed");
    cache.emplace(n, plan);
    return plan;
}

} // namespace

Fft::Fft(std::size_t n) : n_(n) {
    if (n == 0) throw std::invalid_argument("Fft: size must be positive");
    plan_ = cached_plan(n);
}

void Fft::forward(const std::complex<double>* in, std::complex<double>* out) const {
    // fftw_complex and std::complex<double> are layout compatible.
    fftw_execute_dft(static_cast<fftw_plan>(plan_),
                     reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

std::vector<std::complex<double>> Fft::forward(const std::vector<std::complex<double>>& in) const {
    if (in.size() != n_) throw std::invalid_argument("Fft: input size mismatch");
    std::vector<std::complex<double>> out(n_);
    forward(in.data(), out.data());
    return out;
}

} // namespace lorasat
