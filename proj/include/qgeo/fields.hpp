#pragma once

#include <Eigen/Dense>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "qgeo/grid.hpp"

namespace qgeo {

struct SpacetimePoint {
    Vec2 x;
    double t = 0.0;
};

/// Piecewise-linear path in space-time; consecutive vertices are straight
/// segments.
class Curve {
public:
    explicit Curve(std::vector<SpacetimePoint> vertices);
    static Curve straight(const Vec2& a, const Vec2& b, double t = 0.0);
    static Curve spatial(std::vector<Vec2> points, double t = 0.0);
    static Curve temporal(const Vec2& x, double t0, double t1);

    const std::vector<SpacetimePoint>& vertices() const { return vertices_; }
    size_t segment_count() const { return vertices_.size() - 1; }
    Curve reversed() const;
    Curve concatenated(const Curve& tail) const;
    Curve translated(const Vec2& dx) const;
    bool is_closed(double tol = 1e-12) const;
    /// End minus start (the displacement ell^mu of the whole curve).
    SpacetimePoint displacement() const;

private:
    std::vector<SpacetimePoint> vertices_;
};

/// Single-valued analytic gauge scalar built from smooth periodic basis
/// terms. The induced unitary on states is u(x) = exp(i (q/hbar) Lambda(x,t)).
class GaugeFunction {
public:
    struct Term {
        double amplitude = 0.0;
        int wave_x = 1;  // integer wave numbers keep Lambda periodic
        int wave_y = 0;
        double spatial_phase = 0.0;
        double omega = 0.0;  // time factor cos(omega t + time_phase)
        double time_phase = 0.0;
    };

    GaugeFunction(Vec2 domain_lengths, int dimension, std::vector<Term> terms);
    static GaugeFunction zero(Vec2 domain_lengths, int dimension);
    static GaugeFunction random(Vec2 domain_lengths, int dimension, std::mt19937_64& rng,
                                int term_count = 3, double max_amplitude = 0.7,
                                int max_wave = 3, bool time_dependent = false);

    double value(const Vec2& x, double t) const;
    Vec2 gradient(const Vec2& x, double t) const;
    double time_derivative(const Vec2& x, double t) const;
    bool is_zero() const { return terms_.empty(); }
    const std::vector<Term>& terms() const { return terms_; }
    const Vec2& domain_lengths() const { return lengths_; }
    /// Spatial factor of one term: amplitude * sin(2 pi n.x/L + phase).
    double term_spatial_factor(const Term& term, const Vec2& x) const;

private:
    Vec2 lengths_;
    int dimension_;
    std::vector<Term> terms_;
};

struct ZeroField {};

struct UniformField {
    Vec2 A;
    double A0 = 0.0;
};

enum class FluxGauge { azimuthal, strip };

/// Idealized flux string at `center` carrying total flux `flux`: a closed
/// counterclockwise loop around the center integrates A to +flux in either
/// gauge. The strip gauge concentrates A in a band of the given half-width
/// extending from the center along strip_direction (flux core smeared over
/// one half-width along the strip).
struct FluxString {
    Vec2 center;
    double flux = 0.0;
    FluxGauge gauge = FluxGauge::azimuthal;
    Vec2 strip_direction{0.0, -1.0};
    double strip_half_width = 0.5;
};

enum class CapacitorGauge { scalar_potential, vector_potential };

/// Capacitor pulse: F_{0x} = field_strength inside [x_lo,x_hi] x [t_on,t_off]
/// up to the smoothing edges. A compensating return field of equal and
/// opposite flux sits at return_center so the configuration closes on the
/// periodic domain. Realized either through A0 (scalar_potential) or through
/// A_x (vector_potential); the two differ by a single-valued gauge function.
struct CapacitorPulse {
    double x_lo = -1.0;
    double x_hi = 1.0;
    double field_strength = 0.0;
    double t_on = 0.0;
    double t_off = 1.0;
    double edge_width = 0.25;
    double time_edge = 0.05;
    double return_center = 0.0;
    CapacitorGauge gauge = CapacitorGauge::scalar_potential;
};

/// Static tabulated field on a grid; multilinear periodic interpolation.
struct SampledField {
    Grid grid = Grid::make_1d(16, 1.0);
    std::vector<double> A0;
    std::array<std::vector<double>, 2> A;
};

/// Declarative Abelian background: one base variant plus accumulated gauge
/// terms. A gauge term Lambda shifts both stored components,
/// A -> A - grad Lambda and A0 -> A0 - dt Lambda, paired with the state
/// transform psi -> exp(i (q/hbar) Lambda) psi.
class AbelianFieldConfig {
public:
    using Variant = std::variant<ZeroField, UniformField, FluxString, CapacitorPulse, SampledField>;

    AbelianFieldConfig() : base_(ZeroField{}), label_("zero") {}
    AbelianFieldConfig(Variant base, std::string label);

    static AbelianFieldConfig zero();
    static AbelianFieldConfig uniform(const Vec2& A, double A0);
    static AbelianFieldConfig flux_string(const FluxString& fs);
    static AbelianFieldConfig capacitor(const CapacitorPulse& cp);
    static AbelianFieldConfig sampled(SampledField sf);

    struct Potential {
        Vec2 A;
        double A0 = 0.0;
    };
    Potential potential_at(const Vec2& x, double t) const;

    const Variant& base() const { return base_; }
    const std::vector<GaugeFunction>& gauge_terms() const { return terms_; }
    std::string describe() const;

    // Decomposition used by the propagator: stored A = uniform_vector_part
    // + grad(gauge_scalar_chi) + residual. The residual cannot be folded
    // into an exact split-operator factor; evolution requires the state to
    // have no support where it is nonzero.
    Vec2 uniform_vector_part(double t) const;
    double gauge_scalar_chi(const Vec2& x, double t) const;
    double kinetic_residual_bound(const Vec2& x) const;
    double scalar_potential(const Vec2& x, double t) const;
    /// Exact time integral of the scalar potential over [t0, t1] at fixed x.
    double scalar_potential_time_integral(const Vec2& x, double t0, double t1) const;

    friend AbelianFieldConfig gauge_transform(const AbelianFieldConfig& config,
                                              const GaugeFunction& lambda);

private:
    Variant base_;
    std::vector<GaugeFunction> terms_;
    std::string label_;
};

/// Closed-form capacitor profiles: the spatial antiderivative of the box
/// (return field subtracted), the time pulse, and its antiderivative.
double capacitor_box_integral(const CapacitorPulse& cp, double x);
double capacitor_pulse_profile(const CapacitorPulse& cp, double t);
double capacitor_pulse_time_integral(const CapacitorPulse& cp, double t);

/// The exponent (q/hbar) Int_gamma (A0 dt + A . dx). Additive over
/// concatenation, negates under reversal; for a flux string any closed loop
/// of winding m integrates to m * q * flux / hbar.
double line_phase(const AbelianFieldConfig& config, const Curve& curve, double q);

/// Int (A0 dt + A . dx) along one straight space-time segment.
double segment_integral(const AbelianFieldConfig& config, const SpacetimePoint& a,
                        const SpacetimePoint& b);

AbelianFieldConfig gauge_transform(const AbelianFieldConfig& config,
                                   const GaugeFunction& lambda);
WaveFunction gauge_transform_state(const WaveFunction& psi, const GaugeFunction& lambda,
                                   double q, double t = 0.0);

/// exp(-i line_phase) around a closed loop.
cd holonomy(const AbelianFieldConfig& config, const Curve& loop, double q);

struct NonAbelianComponent {
    AbelianFieldConfig field;
    int generator = 0;
};

/// Non-Abelian background A_mu^k T_k with Hermitian generators T_k and
/// component functions drawn from the Abelian variant library. An optional
/// single-generator gauge rotation u(x) = exp(i (g0/hbar) lambda(x,t) T_a)
/// transforms the evaluated field as A_mu -> u A_mu u^dag - d_mu(lambda) T_a.
class NonAbelianFieldConfig {
public:
    NonAbelianFieldConfig(std::vector<Eigen::MatrixXcd> generators, double coupling,
                          std::vector<NonAbelianComponent> components);

    int dim() const { return dim_; }
    double coupling() const { return coupling_; }
    const std::vector<Eigen::MatrixXcd>& generators() const { return generators_; }
    const std::vector<NonAbelianComponent>& components() const { return components_; }

    struct Rotation {
        int generator = 0;
        GaugeFunction lambda;
    };
    const std::optional<Rotation>& rotation() const { return rotation_; }
    /// u(x,t); identity when no rotation is installed.
    Eigen::MatrixXcd rotation_matrix(const Vec2& x, double t) const;

    struct MatrixPotential {
        Eigen::MatrixXcd A0;
        std::array<Eigen::MatrixXcd, 2> A;
    };
    MatrixPotential potential_at(const Vec2& x, double t) const;

    friend NonAbelianFieldConfig gauge_rotate(const NonAbelianFieldConfig& config,
                                              int generator, const GaugeFunction& lambda);

private:
    int dim_;
    std::vector<Eigen::MatrixXcd> generators_;
    double coupling_;
    std::vector<NonAbelianComponent> components_;
    std::optional<Rotation> rotation_;
};

NonAbelianFieldConfig gauge_rotate(const NonAbelianFieldConfig& config, int generator,
                                   const GaugeFunction& lambda);
WaveFunction gauge_rotate_state(const WaveFunction& psi, const NonAbelianFieldConfig& config,
                                double t = 0.0);

/// P exp(-i (g0/hbar) Int_gamma (A0^k dt + A^k . dx) T_k): ordered product of
/// per-step unitaries along the curve, later steps multiplying on the left.
Eigen::MatrixXcd wilson_line(const NonAbelianFieldConfig& config, const Curve& curve,
                             int steps_per_segment = 256);

/// wilson_line restricted to closed loops.
Eigen::MatrixXcd holonomy(const NonAbelianFieldConfig& config, const Curve& loop,
                          int steps_per_segment = 256);

/// exp(i scale K) for Hermitian K (exactly unitary by construction).
Eigen::MatrixXcd expi_hermitian(const Eigen::MatrixXcd& K, double scale);

}  // namespace qgeo
