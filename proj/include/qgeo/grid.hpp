#pragma once

#include <optional>
#include <vector>

#include "qgeo/common.hpp"

namespace qgeo {

/// Periodic uniform grid, 1D or 2D. Axis a covers [-length(a)/2, length(a)/2)
/// with points(a) samples; index arithmetic wraps on every axis.
class Grid {
public:
    static Grid make_1d(int points, double length);
    static Grid make_2d(int points_x, int points_y, double length_x, double length_y);

    int dimension() const { return dimension_; }
    int points(int axis) const { return points_[axis]; }
    double length(int axis) const { return lengths_[axis]; }
    double spacing(int axis) const { return lengths_[axis] / points_[axis]; }
    double origin(int axis) const { return -0.5 * lengths_[axis]; }
    long total_points() const;
    double cell_volume() const;

    /// Coordinate of sample `index` along `axis`.
    double coordinate(int axis, int index) const { return origin(axis) + spacing(axis) * index; }
    /// Angular frequency of FFT bin `index` along `axis` (DFT ordering,
    /// negative frequencies in the upper half).
    double momentum(int axis, int index) const;

    Vec2 position(long flat) const;
    long flat_index(int ix, int iy = 0) const { return dimension_ == 1 ? ix : static_cast<long>(ix) * points_[1] + iy; }

    bool operator==(const Grid& o) const = default;

private:
    Grid(int dim, std::array<int, 2> pts, std::array<double, 2> lens);

    int dimension_ = 1;
    std::array<int, 2> points_{1, 1};
    std::array<double, 2> lengths_{1.0, 1.0};
};

enum class Representation { position, momentum };

/// Complex amplitudes over a periodic grid, optionally carrying an internal
/// (spinor/color) index. Layout: amp[flat * internal_dim + component].
class WaveFunction {
public:
    WaveFunction(Grid grid, int internal_dim = 1,
                 Representation rep = Representation::position);

    const Grid& grid() const { return grid_; }
    int internal_dim() const { return internal_dim_; }
    Representation representation() const { return rep_; }
    void set_representation(Representation r) { rep_ = r; }

    cd& at(long flat, int component = 0) { return amp_[flat * internal_dim_ + component]; }
    const cd& at(long flat, int component = 0) const { return amp_[flat * internal_dim_ + component]; }
    std::vector<cd>& amplitudes() { return amp_; }
    const std::vector<cd>& amplitudes() const { return amp_; }

    /// Cell measure of the current representation (dx-volume or dk-volume).
    double measure() const;
    double norm_squared() const;
    double norm() const;
    void normalize();
    bool finite() const;
    void require_normalized(double tol = 1e-8) const;

private:
    Grid grid_;
    int internal_dim_;
    Representation rep_;
    std::vector<cd> amp_;
};

/// Optional compact-support window for packets: flat top of half-width
/// (half_width - taper), raised-cosine falloff over `taper`, exact zero
/// beyond half_width. Separated windowed packets have genuinely disjoint
/// supports on the grid.
struct WindowSpec {
    Vec2 half_width;
    Vec2 taper;
};

struct PacketSpec {
    Vec2 center;
    Vec2 width{1.0, 1.0};  // position uncertainty per axis
    Vec2 mean_momentum{0.0, 0.0};
    double phase = 0.0;
    std::optional<WindowSpec> window;
};

WaveFunction gaussian_packet(const Grid& grid, const PacketSpec& spec);

/// exp(-(i/hbar) p.ell) psi, computed spectrally; exact for arbitrary real ell.
WaveFunction translate(const WaveFunction& psi, const Vec2& ell);

WaveFunction momentum_transform(const WaveFunction& psi);
WaveFunction position_transform(const WaveFunction& psi_tilde);

/// <p_axis^n> from the momentum-space density. n <= 8.
double moment_expectation(const WaveFunction& psi, int axis, int n);

/// (phi1 + e^{i alpha} phi2) / sqrt(2 + 2 Re(e^{i alpha} <phi1|phi2>)).
WaveFunction superpose_packets(const WaveFunction& phi1, const WaveFunction& phi2,
                               double alpha);

/// Conjugate-linear in the first argument.
cd inner_product(const WaveFunction& a, const WaveFunction& b);

/// Scalar wavefunction tensored with an internal vector (normalized copy of
/// `weights` is used).
WaveFunction tensor_internal(const WaveFunction& psi, const std::vector<cd>& weights);

/// Momentum uncertainty along `axis` from the first two moments.
double momentum_uncertainty(const WaveFunction& psi, int axis);

}  // namespace qgeo
