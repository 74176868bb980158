#include "fft_engine.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace besovflow::detail {
namespace {

struct PlanKey {
    std::array<int, 3> n;
    int dim;
    int sign;
    auto operator<=>(const PlanKey&) const = default;
};

fftw_plan get_plan(const Grid& g, int sign) {
    static std::mutex mu;
    static std::map<PlanKey, fftw_plan> cache;

    PlanKey key{g.n, g.dim, sign};
    std::scoped_lock lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    // Dummy buffers only shape the plan; execution happens on caller arrays.
    std::int64_t total = g.points();
    fftw_complex* buf = fftw_alloc_complex(static_cast<std::size_t>(total));
    int dims[3] = {g.n[0], g.n[1], g.n[2]};
    fftw_plan plan = fftw_plan_dft(g.dim, dims, buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    cache.emplace(key, plan);
    return plan;
}

}  // namespace

void fft_forward(const Grid& g, std::complex<double>* in, std::complex<double>* out) {
    fftw_execute_dft(get_plan(g, FFTW_FORWARD),
                     reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
}

void fft_backward(const Grid& g, std::complex<double>* in, std::complex<double>* out) {
    fftw_execute_dft(get_plan(g, FFTW_BACKWARD),
                     reinterpret_cast<fftw_complex*>(in),
                     reinterpret_cast<fftw_complex*>(out));
}

}  // namespace besovflow::detail
