#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace lorasat {

// Forward DFT of a fixed size, backed by FFTW. Plans are cached per size and
// shared; plan creation is serialized internally (FFTW planning is not
// thread-safe) while execution through the new-array interface is, so
// instances can be used concurrently from multiple threads.
class Fft {
public:
    explicit Fft(std::size_t n);

    std::size_t size() const { return n_; }

    // Unnormalized forward transform. in and out must each hold size()
    // elements and must not alias.
    void forward(const std::complex<double>* in, std::complex<double>* out) const;
    std::vector<std::complex<double>> forward(const std::vector<std::complex<double>>& in) const;

private:
    std::size_t n_;
    void* plan_; // fftw_plan, owned by the global per-size cache
};

} // namespace lorasat
