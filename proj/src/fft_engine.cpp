#include "fft_engine.hpp"

#include <fftw3.h>

#include <mutex>

namespace qgeo::detail {

namespace {
// FFTW plan creation/destruction is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}
}  // namespace

void raw_dft(const Grid& grid, int internal_dim, const std::complex<double>* in,
             std::complex<double>* out, int sign) {
    int rank = grid.dimension();
    int n[2] = {grid.points(0), rank == 2 ? grid.points(1) : 1};

    auto* fin = reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in));
    auto* fout = reinterpret_cast<fftw_complex*>(out);

    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        // FFTW_ESTIMATE does not run trial transforms, so the input buffer is
        // left untouched by planning.
        plan = fftw_plan_many_dft(rank, n, internal_dim, fin, nullptr, internal_dim, 1,
                                  fout, nullptr, internal_dim, 1,
                                  sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
}

}  // namespace qgeo::detail
