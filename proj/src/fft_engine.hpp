#pragma once

#include <complex>
#include <vector>

#include "qgeo/grid.hpp"

namespace qgeo::detail {

/// Unnormalized multi-axis DFT of all internal components.
/// sign = -1: sum_n in[n] exp(-2 pi i <j,n>/N)   (FFTW_FORWARD)
/// sign = +1: conjugate-exponent counterpart.
/// `in` and `out` must have grid.total_points() * internal_dim entries and
/// be distinct buffers.
void raw_dft(const Grid& grid, int internal_dim, const std::complex<double>* in,
             std::complex<double>* out, int sign);

}  // namespace qgeo::detail
