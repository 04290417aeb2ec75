#pragma once

#include <functional>
#include <span>
#include <variant>

#include "qgeo/fields.hpp"
#include "qgeo/grid.hpp"

namespace qgeo {

struct ZeroPotential {};

struct HarmonicPotential {
    double spring_constant = 1.0;
    Vec2 center{0.0, 0.0};
};

using PotentialSpec = std::variant<ZeroPotential, HarmonicPotential>;

double potential_value(const PotentialSpec& v, const Vec2& x);

/// H = (p - qA)^2 / 2m + q A0 + V, with all time dependence coming from the
/// field configuration.
struct HamiltonianSpec {
    double mass = 1.0;
    double charge = 0.0;
    AbelianFieldConfig field = AbelianFieldConfig::zero();
    PotentialSpec potential = ZeroPotential{};
};

struct PropagatorOptions {
    double dt = 1e-3;
    int steps = 1;
    double start_time = 0.0;

    double duration() const { return dt * steps; }
};

/// T exp(-(i/hbar) Int H dt) via Strang splitting with midpoint-sampled
/// factors. The vector potential enters through its uniform part (exact in
/// momentum space) and its gradient part (exact conjugation by
/// exp(-i q chi / hbar)); any leftover piece must vanish on the support of
/// the state, which is checked every step.
WaveFunction evolve(const WaveFunction& psi, const HamiltonianSpec& spec,
                    const PropagatorOptions& opts);

/// {T exp(-(i/hbar) Int H dt)}^dagger: reversed-order product of the per-step
/// adjoint factors at the same midpoint times.
WaveFunction evolve_adjoint(const WaveFunction& psi, const HamiltonianSpec& spec,
                            const PropagatorOptions& opts);

using StateMap = std::function<WaveFunction(const WaveFunction&)>;

/// max over trials of || U S psi - S U psi ||; zero iff S is conserved by U
/// on the trial span.
double commutator_defect(const StateMap& apply_u, const StateMap& apply_s,
                         std::span<const WaveFunction> trials);

/// | <Q>_{t+tau} - <Q>_t | under the given evolution.
double generator_drift(const StateMap& apply_u, const WaveFunction& psi,
                       const StateMap& q_apply);
double generator_drift(const WaveFunction& psi, const HamiltonianSpec& spec,
                       const PropagatorOptions& opts, const StateMap& q_apply);

enum class GratingProfile { phase_cosine, amplitude_cosine };

/// Thin periodic grating: pointwise transmission with period `period` along
/// `axis`. phase_cosine: T = exp(i strength cos(2 pi y / period + offset)),
/// |T| = 1. amplitude_cosine: T = (1 + strength cos(...)) / 2.
struct GratingSpec {
    double period = 1.0;
    GratingProfile profile = GratingProfile::phase_cosine;
    double strength = 1.0;
    double offset = 0.0;
    int axis = 0;
};

WaveFunction apply_grating(const WaveFunction& psi, const GratingSpec& g);

/// Grating transmission value at coordinate y.
cd grating_transmission(const GratingSpec& g, double y);

/// (hbar k_axis) psi, applied spectrally.
WaveFunction apply_momentum_operator(const WaveFunction& psi, int axis);

/// Deterministic battery of band-limited pseudo-random normalized states.
std::vector<WaveFunction> trial_states(const Grid& grid, int count, uint64_t seed);

}  // namespace qgeo
