#include "qgeo/grid.hpp"

#include <algorithm>
#include <cmath>

#include "fft_engine.hpp"

namespace qgeo {

namespace {

void check_axis(const char* what, int points, double length) {
    if (points < 16) throw ContractError(std::string(what) + ": need at least 16 points per axis");
    if (!(length > 0.0)) throw ContractError(std::string(what) + ": axis length must be positive");
}

/// Raised-cosine window: 1 on the flat top, cos^2 falloff over `taper`,
/// exactly 0 beyond half_width.
double window_value(double u, double half_width, double taper) {
    const double a = std::abs(u);
    if (a >= half_width) return 0.0;
    const double flat = half_width - taper;
    if (a <= flat) return 1.0;
    const double c = std::cos(0.5 * kPi * (a - flat) / taper);
    return c * c;
}

}  // namespace

Grid::Grid(int dim, std::array<int, 2> pts, std::array<double, 2> lens)
    : dimension_(dim), points_(pts), lengths_(lens) {}

Grid Grid::make_1d(int points, double length) {
    check_axis("Grid", points, length);
    return Grid(1, {points, 1}, {length, 1.0});
}

Grid Grid::make_2d(int points_x, int points_y, double length_x, double length_y) {
    check_axis("Grid", points_x, length_x);
    check_axis("Grid", points_y, length_y);
    return Grid(2, {points_x, points_y}, {length_x, length_y});
}

long Grid::total_points() const {
    long total = points_[0];
    if (dimension_ == 2) total *= points_[1];
    return total;
}

double Grid::cell_volume() const {
    double v = spacing(0);
    if (dimension_ == 2) v *= spacing(1);
    return v;
}

double Grid::momentum(int axis, int index) const {
    const int n = points_[axis];
    const int f = index <= n / 2 - 1 ? index : index - n;
    return 2.0 * kPi * f / lengths_[axis];
}

Vec2 Grid::position(long flat) const {
    if (dimension_ == 1) return Vec2(coordinate(0, static_cast<int>(flat)));
    const int iy = static_cast<int>(flat % points_[1]);
    const int ix = static_cast<int>(flat / points_[1]);
    return {coordinate(0, ix), coordinate(1, iy)};
}

WaveFunction::WaveFunction(Grid grid, int internal_dim, Representation rep)
    : grid_(grid), internal_dim_(internal_dim), rep_(rep) {
    if (internal_dim < 1) throw ContractError("WaveFunction: internal dimension must be >= 1");
    amp_.assign(static_cast<size_t>(grid_.total_points()) * internal_dim_, cd{0.0, 0.0});
}

double WaveFunction::measure() const {
    if (rep_ == Representation::position) return grid_.cell_volume();
    double v = 2.0 * kPi / grid_.length(0);
    if (grid_.dimension() == 2) v *= 2.0 * kPi / grid_.length(1);
    return v;
}

double WaveFunction::norm_squared() const {
    double s = 0.0;
    for (const cd& a : amp_) s += std::norm(a);
    return s * measure();
}

double WaveFunction::norm() const { return std::sqrt(norm_squared()); }

void WaveFunction::normalize() {
    if (!finite()) throw ContractError("WaveFunction: non-finite amplitude");
    const double n = norm();
    if (n <= 0.0) throw ContractError("WaveFunction: cannot normalize the zero state");
    const double inv = 1.0 / n;
    for (cd& a : amp_) a *= inv;
}

bool WaveFunction::finite() const {
    return std::all_of(amp_.begin(), amp_.end(),
                       [](const cd& a) { return std::isfinite(a.real()) && std::isfinite(a.imag()); });
}

void WaveFunction::require_normalized(double tol) const {
    if (std::abs(norm() - 1.0) > tol)
        throw ContractError("WaveFunction: state is not normalized");
}

namespace {

// Unitary transform pair. Forward maps samples psi(x_n) to
// psi~(k_j) = prod_a (dx_a / sqrt(2 pi)) sum_n psi(x_n) exp(-i k_j . x_n);
// Parseval holds exactly in the discrete inner products.
WaveFunction unitary_transform(const WaveFunction& psi, bool forward) {
    const Grid& g = psi.grid();
    const int dim = g.dimension();
    const int comps = psi.internal_dim();
    WaveFunction out(g, comps,
                     forward ? Representation::momentum : Representation::position);

    double scale = 1.0;
    for (int a = 0; a < dim; ++a)
        scale *= forward ? g.spacing(a) / std::sqrt(2.0 * kPi)
                         : (2.0 * kPi / g.length(a)) / std::sqrt(2.0 * kPi);

    // Origin phase exp(-+ i k . x_min) referenced per momentum bin so the
    // transform matches continuum conventions on the centered domain.
    const int nx = g.points(0), ny = dim == 2 ? g.points(1) : 1;
    std::vector<cd> phase_x(nx), phase_y(ny, cd{1.0, 0.0});
    for (int j = 0; j < nx; ++j) {
        const double arg = -g.momentum(0, j) * g.origin(0);
        phase_x[j] = std::polar(1.0, forward ? arg : -arg);
    }
    if (dim == 2)
        for (int j = 0; j < ny; ++j) {
            const double arg = -g.momentum(1, j) * g.origin(1);
            phase_y[j] = std::polar(1.0, forward ? arg : -arg);
        }

    if (forward) {
        detail::raw_dft(g, comps, psi.amplitudes().data(), out.amplitudes().data(), -1);
        for (int jx = 0; jx < nx; ++jx)
            for (int jy = 0; jy < ny; ++jy) {
                const cd f = scale * phase_x[jx] * phase_y[jy];
                const long flat = static_cast<long>(jx) * ny + jy;
                for (int c = 0; c < comps; ++c) out.at(flat, c) *= f;
            }
    } else {
        // Pre-phase a working copy, then run the inverse exponent DFT.
        WaveFunction work = psi;
        for (int jx = 0; jx < nx; ++jx)
            for (int jy = 0; jy < ny; ++jy) {
                const cd f = phase_x[jx] * phase_y[jy];
                const long flat = static_cast<long>(jx) * ny + jy;
                for (int c = 0; c < comps; ++c) work.at(flat, c) *= f;
            }
        detail::raw_dft(g, comps, work.amplitudes().data(), out.amplitudes().data(), +1);
        for (cd& a : out.amplitudes()) a *= scale;
    }
    return out;
}

}  // namespace

WaveFunction momentum_transform(const WaveFunction& psi) {
    if (psi.representation() != Representation::position)
        throw ContractError("momentum_transform: state is not in position representation");
    return unitary_transform(psi, true);
}

WaveFunction position_transform(const WaveFunction& psi_tilde) {
    if (psi_tilde.representation() != Representation::momentum)
        throw ContractError("position_transform: state is not in momentum representation");
    return unitary_transform(psi_tilde, false);
}

WaveFunction translate(const WaveFunction& psi, const Vec2& ell) {
    if (psi.representation() != Representation::position)
        throw ContractError("translate: state is not in position representation");
    const Grid& g = psi.grid();
    WaveFunction tilde = momentum_transform(psi);
    const int nx = g.points(0), ny = g.dimension() == 2 ? g.points(1) : 1;
    for (int jx = 0; jx < nx; ++jx) {
        const double kx = g.momentum(0, jx);
        for (int jy = 0; jy < ny; ++jy) {
            const double ky = g.dimension() == 2 ? g.momentum(1, jy) : 0.0;
            const cd f = std::polar(1.0, -(kx * ell.x + ky * ell.y) / kHbar);
            const long flat = static_cast<long>(jx) * ny + jy;
            for (int c = 0; c < psi.internal_dim(); ++c) tilde.at(flat, c) *= f;
        }
    }
    return position_transform(tilde);
}

WaveFunction gaussian_packet(const Grid& grid, const PacketSpec& spec) {
    for (int a = 0; a < grid.dimension(); ++a) {
        const double w = spec.width[a];
        if (!(w > 0.0)) throw ContractError("gaussian_packet: width must be positive");
        if (w < 4.0 * grid.spacing(a))
            throw ResolutionError("gaussian_packet: width under-resolved (< 4 grid spacings)");
        const double c = spec.center[a];
        if (c < grid.origin(a) || c >= grid.origin(a) + grid.length(a))
            throw DomainError("gaussian_packet: center outside domain");
        // Tail guard at the periodic boundary.
        const double d = std::min(c - grid.origin(a), grid.origin(a) + grid.length(a) - c);
        if (spec.window) {
            const double hw = spec.window->half_width[a];
            const double tp = spec.window->taper[a];
            if (!(hw > 0.0) || !(tp > 0.0) || tp >= hw)
                throw ContractError("gaussian_packet: window needs 0 < taper < half_width");
            if (hw >= d) throw DomainError("gaussian_packet: window reaches the domain boundary");
        } else if (std::exp(-d * d / (4.0 * w * w)) >= 1e-10) {
            throw DomainError("gaussian_packet: packet tail exceeds 1e-10 at the boundary");
        }
    }

    WaveFunction psi(grid);
    const long total = grid.total_points();
    for (long flat = 0; flat < total; ++flat) {
        const Vec2 x = grid.position(flat);
        double envelope = 1.0;
        double phase = spec.phase;
        for (int a = 0; a < grid.dimension(); ++a) {
            const double u = x[a] - spec.center[a];
            const double w = spec.width[a];
            envelope *= std::pow(2.0 * kPi * w * w, -0.25) * std::exp(-u * u / (4.0 * w * w));
            if (spec.window) envelope *= window_value(u, spec.window->half_width[a], spec.window->taper[a]);
            // Boost phase referenced to the center: psi(center) stays real
            // positive for phase = 0.
            phase += spec.mean_momentum[a] * u / kHbar;
        }
        psi.at(flat) = std::polar(envelope, phase);
    }
    psi.normalize();
    return psi;
}

double moment_expectation(const WaveFunction& psi, int axis, int n) {
    if (n < 0 || n > 8) throw ContractError("moment_expectation: order must satisfy 0 <= n <= 8");
    if (axis < 0 || axis >= psi.grid().dimension())
        throw ContractError("moment_expectation: axis out of range");
    psi.require_normalized();

    const WaveFunction tilde =
        psi.representation() == Representation::momentum ? psi : momentum_transform(psi);
    const Grid& g = psi.grid();
    const int nx = g.points(0), ny = g.dimension() == 2 ? g.points(1) : 1;
    double sum = 0.0;
    for (int jx = 0; jx < nx; ++jx)
        for (int jy = 0; jy < ny; ++jy) {
            const double k = axis == 0 ? g.momentum(0, jx) : g.momentum(1, jy);
            const long flat = static_cast<long>(jx) * ny + jy;
            double density = 0.0;
            for (int c = 0; c < psi.internal_dim(); ++c) density += std::norm(tilde.at(flat, c));
            sum += density * std::pow(kHbar * k, n);
        }
    return sum * tilde.measure();
}

WaveFunction superpose_packets(const WaveFunction& phi1, const WaveFunction& phi2,
                               double alpha) {
    if (phi1.grid() != phi2.grid() || phi1.internal_dim() != phi2.internal_dim())
        throw ContractError("superpose_packets: mismatched states");
    phi1.require_normalized();
    phi2.require_normalized();
    const cd overlap = inner_product(phi1, phi2);
    const cd w = std::polar(1.0, alpha);
    const double denom_sq = 2.0 + 2.0 * (w * overlap).real();
    if (denom_sq < 1e-12)
        throw ContractError("superpose_packets: components cancel, superposition is degenerate");
    const double inv = 1.0 / std::sqrt(denom_sq);
    WaveFunction out = phi1;
    for (size_t i = 0; i < out.amplitudes().size(); ++i)
        out.amplitudes()[i] = (phi1.amplitudes()[i] + w * phi2.amplitudes()[i]) * inv;
    return out;
}

cd inner_product(const WaveFunction& a, const WaveFunction& b) {
    if (a.grid() != b.grid() || a.representation() != b.representation() ||
        a.internal_dim() != b.internal_dim())
        throw ContractError("inner_product: mismatched states");
    cd s{0.0, 0.0};
    for (size_t i = 0; i < a.amplitudes().size(); ++i)
        s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    return s * a.measure();
}

WaveFunction tensor_internal(const WaveFunction& psi, const std::vector<cd>& weights) {
    if (psi.internal_dim() != 1)
        throw ContractError("tensor_internal: base state must be scalar");
    if (weights.size() < 2) throw ContractError("tensor_internal: need at least 2 components");
    double wn = 0.0;
    for (const cd& w : weights) wn += std::norm(w);
    const double inv = 1.0 / std::sqrt(wn);
    WaveFunction out(psi.grid(), static_cast<int>(weights.size()), psi.representation());
    for (long flat = 0; flat < psi.grid().total_points(); ++flat)
        for (size_t c = 0; c < weights.size(); ++c)
            out.at(flat, static_cast<int>(c)) = psi.at(flat) * weights[c] * inv;
    return out;
}

double momentum_uncertainty(const WaveFunction& psi, int axis) {
    const double m1 = moment_expectation(psi, axis, 1);
    const double m2 = moment_expectation(psi, axis, 2);
    return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

}  // namespace qgeo
