#include "qgeo/fields.hpp"

#include <algorithm>
#include <cmath>

namespace qgeo {

namespace {

// 16-point Gauss-Legendre rule on [-1, 1]; exact for polynomials up to
// degree 31, which covers every piecewise-polynomial integrand below.
constexpr int kGaussN = 16;
constexpr double kGaussNode[kGaussN] = {
    -0.9894009349916499325961542, -0.9445750230732325760779884,
    -0.8656312023878317438804679, -0.7554044083550030338951012,
    -0.6178762444026437484466718, -0.4580167776572273863424194,
    -0.2816035507792589132304605, -0.0950125098376374401853193,
    0.0950125098376374401853193,  0.2816035507792589132304605,
    0.4580167776572273863424194,  0.6178762444026437484466718,
    0.7554044083550030338951012,  0.8656312023878317438804679,
    0.9445750230732325760779884,  0.9894009349916499325961542};
constexpr double kGaussWeight[kGaussN] = {
    0.0271524594117540948517806, 0.0622535239386478928628438,
    0.0951585116824927848099251, 0.1246289712555338720524763,
    0.1495959888165767320815017, 0.1691565193950025381893121,
    0.1826034150449235888667637, 0.1894506104550684962853967,
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

// C^4 bump (315/256)(1-u^2)^4 on [-1,1] with unit integral, its smooth-step
// antiderivative H (0 -> 1), and the antiderivative of H.
double bump_unit(double u) {
    if (std::abs(u) >= 1.0) return 0.0;
    const double w = 1.0 - u * u;
    const double w2 = w * w;
    return (315.0 / 256.0) * w2 * w2;
}

double smooth_step(double u) {
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double u2 = u * u;
    const double p = u * (1.0 + u2 * (-4.0 / 3.0 + u2 * (6.0 / 5.0 + u2 * (-4.0 / 7.0 + u2 / 9.0))));
    return (315.0 / 256.0) * p + 0.5;
}

double smooth_step_integral(double u) {
    if (u <= -1.0) return 0.0;
    if (u >= 1.0) return u;
    const double u2 = u * u;
    const double r = u2 * (0.5 + u2 * (-1.0 / 3.0 + u2 * (0.2 + u2 * (-1.0 / 14.0 + u2 / 90.0))));
    constexpr double r_at_one = 193.0 / 630.0;
    return (315.0 / 256.0) * (r - r_at_one) + 0.5 * (u + 1.0);
}

// Smoothed box profile on [lo, hi] with edge half-width e: 0 outside
// [lo-e, hi+e], 1 on [lo+e, hi-e]; integral is exactly hi - lo.
double smooth_box(double x, double lo, double hi, double e) {
    return smooth_step((x - lo) / e) - smooth_step((x - hi) / e);
}

double smooth_box_integral(double x, double lo, double hi, double e) {
    return e * (smooth_step_integral((x - lo) / e) - smooth_step_integral((x - hi) / e));
}

struct CapacitorProfile {
    const CapacitorPulse& cp;

    double box(double x) const {
        const double w = cp.x_hi - cp.x_lo;
        return smooth_box(x, cp.x_lo, cp.x_hi, cp.edge_width) -
               smooth_box(x, cp.return_center - 0.5 * w, cp.return_center + 0.5 * w,
                          cp.edge_width);
    }
    double box_integral(double x) const {
        const double w = cp.x_hi - cp.x_lo;
        return smooth_box_integral(x, cp.x_lo, cp.x_hi, cp.edge_width) -
               smooth_box_integral(x, cp.return_center - 0.5 * w,
                                   cp.return_center + 0.5 * w, cp.edge_width);
    }
    double pulse(double t) const { return smooth_box(t, cp.t_on, cp.t_off, cp.time_edge); }
    double pulse_integral(double t) const {
        return smooth_box_integral(t, cp.t_on, cp.t_off, cp.time_edge);
    }
};

struct StripFrame {
    Vec2 normal;     // direction of A
    Vec2 along;      // strip extent direction
    double w;

    explicit StripFrame(const FluxString& fs) {
        const double n = fs.strip_direction.norm();
        if (!(n > 0.0)) throw ContractError("flux_string: strip direction must be nonzero");
        along = fs.strip_direction * (1.0 / n);
        normal = along.perp();
        w = fs.strip_half_width;
        if (!(w > 0.0)) throw ContractError("flux_string: strip half-width must be positive");
    }
    double s(const Vec2& r) const { return normal.dot(r); }
    double tc(const Vec2& r) const { return along.dot(r); }
};

Vec2 strip_vector_potential(const FluxString& fs, const Vec2& x) {
    const StripFrame f(fs);
    const Vec2 r = x - fs.center;
    const double profile = bump_unit(f.s(r) / f.w) / f.w;
    const double gate = smooth_step(2.0 * f.tc(r) / f.w - 1.0);
    return f.normal * (fs.flux * profile * gate);
}

// Collects parameter values in (0,1) where the affine map p0 + u*dp crosses
// any of the given thresholds.
void affine_crossings(double p0, double dp, std::initializer_list<double> thresholds,
                      std::vector<double>& out) {
    if (dp == 0.0) return;
    for (double th : thresholds) {
        const double u = (th - p0) / dp;
        if (u > 0.0 && u < 1.0) out.push_back(u);
    }
}

template <typename F>
double piecewise_gauss(const std::vector<double>& breaks, F&& integrand) {
    double total = 0.0;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double lo = breaks[i], hi = breaks[i + 1];
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        if (half <= 0.0) continue;
        double acc = 0.0;
        for (int g = 0; g < kGaussN; ++g)
            acc += kGaussWeight[g] * integrand(mid + half * kGaussNode[g]);
        total += acc * half;
    }
    return total;
}

std::vector<double> sorted_breaks(std::vector<double> interior) {
    interior.push_back(0.0);
    interior.push_back(1.0);
    std::sort(interior.begin(), interior.end());
    return interior;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    const double len2 = d.squared_norm();
    if (len2 == 0.0) return (p - a).norm();
    const double u = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
    return (p - (a + d * u)).norm();
}

// Periodic multilinear interpolation of one sampled table.
double sample_table(const Grid& g, const std::vector<double>& table, const Vec2& x) {
    auto axis_locate = [&](int axis, double v, int& i0, int& i1, double& f) {
        const double u = (v - g.origin(axis)) / g.spacing(axis);
        const double fl = std::floor(u);
        i0 = static_cast<int>(fl) % g.points(axis);
        if (i0 < 0) i0 += g.points(axis);
        i1 = (i0 + 1) % g.points(axis);
        f = u - fl;
    };
    int ix0, ix1, iy0 = 0, iy1 = 0;
    double fx, fy = 0.0;
    axis_locate(0, x.x, ix0, ix1, fx);
    if (g.dimension() == 2) axis_locate(1, x.y, iy0, iy1, fy);
    if (g.dimension() == 1) return (1.0 - fx) * table[ix0] + fx * table[ix1];
    auto at = [&](int ix, int iy) { return table[g.flat_index(ix, iy)]; };
    return (1.0 - fx) * ((1.0 - fy) * at(ix0, iy0) + fy * at(ix0, iy1)) +
           fx * ((1.0 - fy) * at(ix1, iy0) + fy * at(ix1, iy1));
}

bool lexicographic_less(const SpacetimePoint& a, const SpacetimePoint& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.x.x != b.x.x) return a.x.x < b.x.x;
    return a.x.y < b.x.y;
}

}  // namespace

// --- Curve -----------------------------------------------------------------

Curve::Curve(std::vector<SpacetimePoint> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() < 2) throw ContractError("Curve: need at least 2 vertices");
    for (const auto& v : vertices_)
        if (!std::isfinite(v.x.x) || !std::isfinite(v.x.y) || !std::isfinite(v.t))
            throw ContractError("Curve: non-finite vertex");
}

Curve Curve::straight(const Vec2& a, const Vec2& b, double t) {
    return Curve({{a, t}, {b, t}});
}

Curve Curve::spatial(std::vector<Vec2> points, double t) {
    std::vector<SpacetimePoint> v;
    v.reserve(points.size());
    for (const Vec2& p : points) v.push_back({p, t});
    return Curve(std::move(v));
}

Curve Curve::temporal(const Vec2& x, double t0, double t1) {
    return Curve({{x, t0}, {x, t1}});
}

Curve Curve::reversed() const {
    std::vector<SpacetimePoint> v(vertices_.rbegin(), vertices_.rend());
    return Curve(std::move(v));
}

Curve Curve::concatenated(const Curve& tail) const {
    const SpacetimePoint& join_a = vertices_.back();
    const SpacetimePoint& join_b = tail.vertices_.front();
    if ((join_a.x - join_b.x).norm() + std::abs(join_a.t - join_b.t) > 1e-12)
        throw ContractError("Curve: concatenation endpoints do not match");
    std::vector<SpacetimePoint> v = vertices_;
    v.insert(v.end(), tail.vertices_.begin() + 1, tail.vertices_.end());
    return Curve(std::move(v));
}

Curve Curve::translated(const Vec2& dx) const {
    std::vector<SpacetimePoint> v = vertices_;
    for (auto& p : v) p.x += dx;
    return Curve(std::move(v));
}

bool Curve::is_closed(double tol) const {
    const SpacetimePoint& a = vertices_.front();
    const SpacetimePoint& b = vertices_.back();
    return (a.x - b.x).norm() + std::abs(a.t - b.t) <= tol;
}

SpacetimePoint Curve::displacement() const {
    return {vertices_.back().x - vertices_.front().x, vertices_.back().t - vertices_.front().t};
}

// --- GaugeFunction -----------------------------------------------------------

GaugeFunction::GaugeFunction(Vec2 domain_lengths, int dimension, std::vector<Term> terms)
    : lengths_(domain_lengths), dimension_(dimension), terms_(std::move(terms)) {
    if (dimension_ != 1 && dimension_ != 2) throw ContractError("GaugeFunction: dimension must be 1 or 2");
    for (auto& t : terms_)
        if (dimension_ == 1) t.wave_y = 0;
}

GaugeFunction GaugeFunction::zero(Vec2 domain_lengths, int dimension) {
    return GaugeFunction(domain_lengths, dimension, {});
}

GaugeFunction GaugeFunction::random(Vec2 domain_lengths, int dimension, std::mt19937_64& rng,
                                    int term_count, double max_amplitude, int max_wave,
                                    bool time_dependent) {
    std::uniform_real_distribution<double> amp(-max_amplitude, max_amplitude);
    std::uniform_int_distribution<int> wave(-max_wave, max_wave);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    std::vector<Term> terms;
    for (int i = 0; i < term_count; ++i) {
        Term t;
        t.amplitude = amp(rng);
        do {
            t.wave_x = wave(rng);
            t.wave_y = dimension == 2 ? wave(rng) : 0;
        } while (t.wave_x == 0 && t.wave_y == 0);
        t.spatial_phase = angle(rng);
        if (time_dependent) {
            t.omega = 0.5 + 1.5 * std::abs(amp(rng)) / std::max(1e-12, max_amplitude);
            t.time_phase = angle(rng);
        }
        terms.push_back(t);
    }
    return GaugeFunction(domain_lengths, dimension, std::move(terms));
}

double GaugeFunction::value(const Vec2& x, double t) const {
    double v = 0.0;
    for (const Term& term : terms_) {
        double arg = 2.0 * kPi * term.wave_x * x.x / lengths_.x + term.spatial_phase;
        if (dimension_ == 2) arg += 2.0 * kPi * term.wave_y * x.y / lengths_.y;
        v += term.amplitude * std::sin(arg) * std::cos(term.omega * t + term.time_phase);
    }
    return v;
}

Vec2 GaugeFunction::gradient(const Vec2& x, double t) const {
    Vec2 g{0.0, 0.0};
    for (const Term& term : terms_) {
        double arg = 2.0 * kPi * term.wave_x * x.x / lengths_.x + term.spatial_phase;
        if (dimension_ == 2) arg += 2.0 * kPi * term.wave_y * x.y / lengths_.y;
        const double f = term.amplitude * std::cos(arg) * std::cos(term.omega * t + term.time_phase);
        g.x += f * 2.0 * kPi * term.wave_x / lengths_.x;
        if (dimension_ == 2) g.y += f * 2.0 * kPi * term.wave_y / lengths_.y;
    }
    return g;
}

double GaugeFunction::time_derivative(const Vec2& x, double t) const {
    double v = 0.0;
    for (const Term& term : terms_) {
        if (term.omega == 0.0) continue;
        double arg = 2.0 * kPi * term.wave_x * x.x / lengths_.x + term.spatial_phase;
        if (dimension_ == 2) arg += 2.0 * kPi * term.wave_y * x.y / lengths_.y;
        v -= term.amplitude * std::sin(arg) * term.omega * std::sin(term.omega * t + term.time_phase);
    }
    return v;
}

double GaugeFunction::term_spatial_factor(const Term& term, const Vec2& x) const {
    double arg = 2.0 * kPi * term.wave_x * x.x / lengths_.x + term.spatial_phase;
    if (dimension_ == 2) arg += 2.0 * kPi * term.wave_y * x.y / lengths_.y;
    return term.amplitude * std::sin(arg);
}

// --- AbelianFieldConfig -------------------------------------------------------

AbelianFieldConfig::AbelianFieldConfig(Variant base, std::string label)
    : base_(std::move(base)), label_(std::move(label)) {}

AbelianFieldConfig AbelianFieldConfig::zero() { return AbelianFieldConfig(ZeroField{}, "zero"); }

AbelianFieldConfig AbelianFieldConfig::uniform(const Vec2& A, double A0) {
    return AbelianFieldConfig(UniformField{A, A0}, "uniform");
}

AbelianFieldConfig AbelianFieldConfig::flux_string(const FluxString& fs) {
    StripFrame frame(fs);  // validates strip parameters
    (void)frame;
    return AbelianFieldConfig(fs, fs.gauge == FluxGauge::azimuthal ? "flux_string[azimuthal]"
                                                                   : "flux_string[strip]");
}

AbelianFieldConfig AbelianFieldConfig::capacitor(const CapacitorPulse& cp) {
    if (!(cp.x_lo < cp.x_hi) || !(cp.t_on < cp.t_off))
        throw ContractError("capacitor: need x_lo < x_hi and t_on < t_off");
    if (!(cp.edge_width > 0.0) || !(cp.time_edge > 0.0))
        throw ContractError("capacitor: smoothing widths must be positive");
    const double w = cp.x_hi - cp.x_lo;
    if (std::abs(cp.return_center - 0.5 * (cp.x_lo + cp.x_hi)) < w + 2.0 * cp.edge_width)
        throw ContractError("capacitor: return field overlaps the main interval");
    return AbelianFieldConfig(cp, cp.gauge == CapacitorGauge::scalar_potential
                                      ? "capacitor[scalar]"
                                      : "capacitor[vector]");
}

AbelianFieldConfig AbelianFieldConfig::sampled(SampledField sf) {
    const size_t n = static_cast<size_t>(sf.grid.total_points());
    if (sf.A0.size() != n || sf.A[0].size() != n ||
        (sf.grid.dimension() == 2 && sf.A[1].size() != n))
        throw ContractError("sampled field: table sizes do not match the grid");
    return AbelianFieldConfig(std::move(sf), "sampled");
}

AbelianFieldConfig::Potential AbelianFieldConfig::potential_at(const Vec2& x, double t) const {
    Potential p{};
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ZeroField>) {
            } else if constexpr (std::is_same_v<T, UniformField>) {
                p.A = v.A;
                p.A0 = v.A0;
            } else if constexpr (std::is_same_v<T, FluxString>) {
                if (v.gauge == FluxGauge::azimuthal) {
                    const Vec2 r = x - v.center;
                    const double r2 = r.squared_norm();
                    if (r2 < 1e-24)
                        throw SingularityError("flux_string: potential evaluated at the string");
                    p.A = Vec2{-r.y, r.x} * (v.flux / (2.0 * kPi * r2));
                } else {
                    p.A = strip_vector_potential(v, x);
                }
            } else if constexpr (std::is_same_v<T, CapacitorPulse>) {
                const CapacitorProfile c{v};
                if (v.gauge == CapacitorGauge::scalar_potential)
                    p.A0 = -v.field_strength * c.box_integral(x.x) * c.pulse(t);
                else
                    p.A.x = v.field_strength * c.box(x.x) * c.pulse_integral(t);
            } else if constexpr (std::is_same_v<T, SampledField>) {
                p.A0 = sample_table(v.grid, v.A0, x);
                p.A.x = sample_table(v.grid, v.A[0], x);
                if (v.grid.dimension() == 2) p.A.y = sample_table(v.grid, v.A[1], x);
            }
        },
        base_);
    for (const GaugeFunction& lam : terms_) {
        p.A += -lam.gradient(x, t);
        p.A0 -= lam.time_derivative(x, t);
    }
    return p;
}

std::string AbelianFieldConfig::describe() const {
    if (terms_.empty()) return label_;
    return label_ + "+" + std::to_string(terms_.size()) + "gauge";
}

namespace {

double base_segment_integral(const AbelianFieldConfig::Variant& base, const SpacetimePoint& a,
                             const SpacetimePoint& b) {
    const Vec2 dx = b.x - a.x;
    const double dt = b.t - a.t;
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, ZeroField>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, UniformField>) {
                return v.A.dot(dx) + v.A0 * dt;
            } else if constexpr (std::is_same_v<T, FluxString>) {
                if (dx.norm() == 0.0) return 0.0;
                if (v.gauge == FluxGauge::azimuthal) {
                    const Vec2 pa = a.x - v.center, pb = b.x - v.center;
                    const double clearance =
                        1e-9 * std::max({1.0, pa.norm(), pb.norm(), dx.norm()});
                    if (point_segment_distance(v.center, a.x, b.x) < clearance)
                        throw SingularityError("flux_string: curve passes through the string");
                    // A is the gradient of (flux/2pi) times the polar angle;
                    // a straight chord subtends strictly less than pi.
                    return v.flux / (2.0 * kPi) * std::atan2(pa.cross(pb), pa.dot(pb));
                }
                const StripFrame f(v);
                const double s0 = f.s(a.x - v.center), s1 = f.s(b.x - v.center);
                const double c0 = f.tc(a.x - v.center), c1 = f.tc(b.x - v.center);
                std::vector<double> cuts;
                affine_crossings(s0, s1 - s0, {-f.w, f.w}, cuts);
                affine_crossings(c0, c1 - c0, {0.0, f.w}, cuts);
                const double proj = f.normal.dot(dx);
                if (proj == 0.0) return 0.0;
                return piecewise_gauss(sorted_breaks(std::move(cuts)), [&](double u) {
                    const double s = s0 + u * (s1 - s0);
                    const double c = c0 + u * (c1 - c0);
                    return v.flux * (bump_unit(s / f.w) / f.w) *
                           smooth_step(2.0 * c / f.w - 1.0) * proj;
                });
            } else if constexpr (std::is_same_v<T, CapacitorPulse>) {
                const CapacitorProfile c{v};
                const double w = v.x_hi - v.x_lo;
                std::vector<double> cuts;
                affine_crossings(a.x.x, dx.x,
                                 {v.x_lo - v.edge_width, v.x_lo + v.edge_width,
                                  v.x_hi - v.edge_width, v.x_hi + v.edge_width,
                                  v.return_center - 0.5 * w - v.edge_width,
                                  v.return_center - 0.5 * w + v.edge_width,
                                  v.return_center + 0.5 * w - v.edge_width,
                                  v.return_center + 0.5 * w + v.edge_width},
                                 cuts);
                affine_crossings(a.t, dt,
                                 {v.t_on - v.time_edge, v.t_on + v.time_edge,
                                  v.t_off - v.time_edge, v.t_off + v.time_edge},
                                 cuts);
                const auto breaks = sorted_breaks(std::move(cuts));
                if (v.gauge == CapacitorGauge::scalar_potential) {
                    if (dt == 0.0) return 0.0;
                    return piecewise_gauss(breaks, [&](double u) {
                        return -v.field_strength * c.box_integral(a.x.x + u * dx.x) *
                               c.pulse(a.t + u * dt) * dt;
                    });
                }
                if (dx.x == 0.0) return 0.0;
                return piecewise_gauss(breaks, [&](double u) {
                    return v.field_strength * c.box(a.x.x + u * dx.x) *
                           c.pulse_integral(a.t + u * dt) * dx.x;
                });
            } else if constexpr (std::is_same_v<T, SampledField>) {
                const double len = dx.norm() + std::abs(dt);
                if (len == 0.0) return 0.0;
                const double h = 0.5 * std::min(v.grid.spacing(0),
                                                v.grid.dimension() == 2 ? v.grid.spacing(1)
                                                                        : v.grid.spacing(0));
                const int n = std::max(2, static_cast<int>(std::ceil(len / h)));
                auto f = [&](double u) {
                    const Vec2 x = a.x + dx * u;
                    double val = sample_table(v.grid, v.A[0], x) * dx.x;
                    if (v.grid.dimension() == 2) val += sample_table(v.grid, v.A[1], x) * dx.y;
                    return val + sample_table(v.grid, v.A0, x) * dt;
                };
                double acc = 0.5 * (f(0.0) + f(1.0));
                for (int i = 1; i < n; ++i) acc += f(static_cast<double>(i) / n);
                return acc / n;
            }
        },
        base);
}

}  // namespace

double segment_integral(const AbelianFieldConfig& config, const SpacetimePoint& a,
                        const SpacetimePoint& b) {
    // Canonical orientation makes reversal antisymmetry exact.
    if (lexicographic_less(b, a)) return -segment_integral(config, b, a);
    double total = base_segment_integral(config.base(), a, b);
    // Gauge terms contribute -grad Lambda and -dt Lambda; along any straight
    // space-time segment that integrates exactly to -(Lambda(b) - Lambda(a)).
    for (const GaugeFunction& lam : config.gauge_terms())
        total -= lam.value(b.x, b.t) - lam.value(a.x, a.t);
    return total;
}

double line_phase(const AbelianFieldConfig& config, const Curve& curve, double q) {
    double total = 0.0;
    const auto& v = curve.vertices();
    for (size_t i = 0; i + 1 < v.size(); ++i) total += segment_integral(config, v[i], v[i + 1]);
    return q / kHbar * total;
}

AbelianFieldConfig gauge_transform(const AbelianFieldConfig& config,
                                   const GaugeFunction& lambda) {
    AbelianFieldConfig out = config;
    if (!lambda.is_zero()) out.terms_.push_back(lambda);
    return out;
}

WaveFunction gauge_transform_state(const WaveFunction& psi, const GaugeFunction& lambda,
                                   double q, double t) {
    if (psi.representation() != Representation::position)
        throw ContractError("gauge_transform_state: state must be in position representation");
    WaveFunction out = psi;
    const Grid& g = psi.grid();
    for (long flat = 0; flat < g.total_points(); ++flat) {
        const cd u = std::polar(1.0, q / kHbar * lambda.value(g.position(flat), t));
        for (int c = 0; c < psi.internal_dim(); ++c) out.at(flat, c) *= u;
    }
    return out;
}

cd holonomy(const AbelianFieldConfig& config, const Curve& loop, double q) {
    if (!loop.is_closed()) throw ContractError("holonomy: curve is not closed");
    return std::polar(1.0, -line_phase(config, loop, q));
}

Vec2 AbelianFieldConfig::uniform_vector_part(double t) const {
    (void)t;
    if (const auto* u = std::get_if<UniformField>(&base_)) return u->A;
    return Vec2{0.0, 0.0};
}

double AbelianFieldConfig::gauge_scalar_chi(const Vec2& x, double t) const {
    double chi = 0.0;
    if (const auto* cp = std::get_if<CapacitorPulse>(&base_)) {
        if (cp->gauge == CapacitorGauge::vector_potential) {
            const CapacitorProfile c{*cp};
            chi += cp->field_strength * c.box_integral(x.x) * c.pulse_integral(t);
        }
    }
    for (const GaugeFunction& lam : terms_) chi -= lam.value(x, t);
    return chi;
}

double AbelianFieldConfig::kinetic_residual_bound(const Vec2& x) const {
    return std::visit(
        [&](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, FluxString>) {
                if (v.gauge == FluxGauge::azimuthal) {
                    const Vec2 r = x - v.center;
                    const double rn = r.norm();
                    return rn < 1e-12 ? 1e12 : std::abs(v.flux) / (2.0 * kPi * rn);
                }
                return strip_vector_potential(v, x).norm();
            } else if constexpr (std::is_same_v<T, SampledField>) {
                Vec2 a{sample_table(v.grid, v.A[0], x),
                       v.grid.dimension() == 2 ? sample_table(v.grid, v.A[1], x) : 0.0};
                return a.norm();  // sampled A is not folded into a split factor
            } else {
                (void)v;
                return 0.0;
            }
        },
        base_);
}

double AbelianFieldConfig::scalar_potential(const Vec2& x, double t) const {
    return potential_at(x, t).A0;
}

double AbelianFieldConfig::scalar_potential_time_integral(const Vec2& x, double t0,
                                                          double t1) const {
    double total = 0.0;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, UniformField>) {
                total += v.A0 * (t1 - t0);
            } else if constexpr (std::is_same_v<T, CapacitorPulse>) {
                if (v.gauge == CapacitorGauge::scalar_potential) {
                    const CapacitorProfile c{v};
                    total += -v.field_strength * c.box_integral(x.x) *
                             (c.pulse_integral(t1) - c.pulse_integral(t0));
                }
            } else if constexpr (std::is_same_v<T, SampledField>) {
                total += sample_table(v.grid, v.A0, x) * (t1 - t0);
            }
        },
        base_);
    for (const GaugeFunction& lam : terms_)
        total -= lam.value(x, t1) - lam.value(x, t0);
    return total;
}

// --- NonAbelianFieldConfig ----------------------------------------------------

NonAbelianFieldConfig::NonAbelianFieldConfig(std::vector<Eigen::MatrixXcd> generators,
                                             double coupling,
                                             std::vector<NonAbelianComponent> components)
    : generators_(std::move(generators)), coupling_(coupling), components_(std::move(components)) {
    if (generators_.empty()) throw ContractError("non-Abelian config: no generators");
    dim_ = static_cast<int>(generators_[0].rows());
    if (dim_ < 2) throw ContractError("non-Abelian config: matrix dimension must be >= 2");
    for (const auto& T : generators_) {
        if (T.rows() != dim_ || T.cols() != dim_)
            throw ContractError("non-Abelian config: generator dimensions disagree");
        if ((T - T.adjoint()).norm() > 1e-12 * std::max(1.0, T.norm()))
            throw ContractError("non-Abelian config: generators must be Hermitian");
    }
    const size_t n = generators_.size();
    Eigen::MatrixXd gram(n, n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            gram(i, j) = (generators_[i].adjoint() * generators_[j]).trace().real();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (static_cast<size_t>(lu.rank()) != n)
        throw ContractError("non-Abelian config: generators are linearly dependent");
    for (const auto& comp : components_)
        if (comp.generator < 0 || comp.generator >= static_cast<int>(n))
            throw ContractError("non-Abelian config: component generator index out of range");
}

Eigen::MatrixXcd NonAbelianFieldConfig::rotation_matrix(const Vec2& x, double t) const {
    if (!rotation_) return Eigen::MatrixXcd::Identity(dim_, dim_);
    const double lam = rotation_->lambda.value(x, t);
    return expi_hermitian(generators_[rotation_->generator], coupling_ / kHbar * lam);
}

NonAbelianFieldConfig::MatrixPotential NonAbelianFieldConfig::potential_at(const Vec2& x,
                                                                           double t) const {
    MatrixPotential mp{Eigen::MatrixXcd::Zero(dim_, dim_),
                       {Eigen::MatrixXcd::Zero(dim_, dim_), Eigen::MatrixXcd::Zero(dim_, dim_)}};
    for (const auto& comp : components_) {
        const auto p = comp.field.potential_at(x, t);
        mp.A0 += p.A0 * generators_[comp.generator];
        mp.A[0] += p.A.x * generators_[comp.generator];
        mp.A[1] += p.A.y * generators_[comp.generator];
    }
    if (rotation_) {
        const Eigen::MatrixXcd u = rotation_matrix(x, t);
        const Eigen::MatrixXcd& Ta = generators_[rotation_->generator];
        mp.A0 = u * mp.A0 * u.adjoint() - rotation_->lambda.time_derivative(x, t) * Ta;
        const Vec2 grad = rotation_->lambda.gradient(x, t);
        mp.A[0] = u * mp.A[0] * u.adjoint() - grad.x * Ta;
        mp.A[1] = u * mp.A[1] * u.adjoint() - grad.y * Ta;
    }
    return mp;
}

NonAbelianFieldConfig gauge_rotate(const NonAbelianFieldConfig& config, int generator,
                                   const GaugeFunction& lambda) {
    if (generator < 0 || generator >= static_cast<int>(config.generators().size()))
        throw ContractError("gauge_rotate: generator index out of range");
    if (config.rotation_)
        throw ContractError("gauge_rotate: config already carries a rotation");
    NonAbelianFieldConfig out = config;
    out.rotation_ = NonAbelianFieldConfig::Rotation{generator, lambda};
    return out;
}

WaveFunction gauge_rotate_state(const WaveFunction& psi, const NonAbelianFieldConfig& config,
                                double t) {
    if (psi.internal_dim() != config.dim())
        throw ContractError("gauge_rotate_state: internal dimension mismatch");
    WaveFunction out = psi;
    const Grid& g = psi.grid();
    Eigen::VectorXcd comp(config.dim());
    for (long flat = 0; flat < g.total_points(); ++flat) {
        const Eigen::MatrixXcd u = config.rotation_matrix(g.position(flat), t);
        for (int c = 0; c < config.dim(); ++c) comp(c) = psi.at(flat, c);
        const Eigen::VectorXcd r = u * comp;
        for (int c = 0; c < config.dim(); ++c) out.at(flat, c) = r(c);
    }
    return out;
}

Eigen::MatrixXcd expi_hermitian(const Eigen::MatrixXcd& K, double scale) {
    const int d = static_cast<int>(K.rows());
    if (d == 1) return (Eigen::MatrixXcd(1, 1) << std::polar(1.0, scale * K(0, 0).real())).finished();
    if (d == 2) {
        const double c0 = 0.5 * (K(0, 0).real() + K(1, 1).real());
        const double az = 0.5 * (K(0, 0).real() - K(1, 1).real());
        const cd b = K(0, 1);
        const double r = std::sqrt(az * az + std::norm(b));
        Eigen::MatrixXcd out(2, 2);
        const cd base = std::polar(1.0, scale * c0);
        if (r < 1e-300) {
            out = base * Eigen::MatrixXcd::Identity(2, 2);
            return out;
        }
        const double cr = std::cos(scale * r), sr = std::sin(scale * r) / r;
        out(0, 0) = base * (cd(cr, 0.0) + kI * sr * az);
        out(1, 1) = base * (cd(cr, 0.0) - kI * sr * az);
        out(0, 1) = base * kI * sr * b;
        out(1, 0) = base * kI * sr * std::conj(b);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(K);
    Eigen::VectorXcd phases(d);
    for (int i = 0; i < d; ++i) phases(i) = std::polar(1.0, scale * es.eigenvalues()(i));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::MatrixXcd wilson_line(const NonAbelianFieldConfig& config, const Curve& curve,
                             int steps_per_segment) {
    if (steps_per_segment < 16)
        throw ContractError("wilson_line: need at least 16 steps per segment");
    const int d = config.dim();
    Eigen::MatrixXcd W = Eigen::MatrixXcd::Identity(d, d);
    const auto& verts = curve.vertices();
    for (size_t seg = 0; seg + 1 < verts.size(); ++seg) {
        const SpacetimePoint& a = verts[seg];
        const SpacetimePoint& b = verts[seg + 1];
        for (int j = 0; j < steps_per_segment; ++j) {
            const double u0 = static_cast<double>(j) / steps_per_segment;
            const double u1 = static_cast<double>(j + 1) / steps_per_segment;
            const SpacetimePoint p0{a.x + (b.x - a.x) * u0, a.t + (b.t - a.t) * u0};
            const SpacetimePoint p1{a.x + (b.x - a.x) * u1, a.t + (b.t - a.t) * u1};
            Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(d, d);
            // Abelian component integrals over the sub-step are exact; only
            // the ordering of the per-step factors is approximate.
            for (const auto& comp : config.components())
                K += segment_integral(comp.field, p0, p1) * config.generators()[comp.generator];
            if (config.rotation()) {
                const Vec2 xm = (p0.x + p1.x) * 0.5;
                const double tm = 0.5 * (p0.t + p1.t);
                const Eigen::MatrixXcd u = config.rotation_matrix(xm, tm);
                const double dl = config.rotation()->lambda.value(p1.x, p1.t) -
                                  config.rotation()->lambda.value(p0.x, p0.t);
                K = u * K * u.adjoint() - dl * config.generators()[config.rotation()->generator];
            }
            W = expi_hermitian(K, -config.coupling() / kHbar) * W;
        }
    }
    return W;
}

Eigen::MatrixXcd holonomy(const NonAbelianFieldConfig& config, const Curve& loop,
                          int steps_per_segment) {
    if (!loop.is_closed()) throw ContractError("holonomy: curve is not closed");
    return wilson_line(config, loop, steps_per_segment);
}

}  // namespace qgeo
