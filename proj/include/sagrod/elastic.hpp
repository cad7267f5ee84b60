#pragma once

#include "sagrod/strand.hpp"

#include <vector>

namespace sagrod {

struct ExternalLoad {
    Vec3 gravity{0.0, -9.81, 0.0};                     // m/s^2
    std::vector<std::pair<int, Vec3>> vertex_forces;   // (vertex index, force [N])
};

struct RestShape {
    VecX lengths;                 // N-1 [m]
    std::vector<Vec4> curvatures; // N-2, entry k is interior vertex k+1
    VecX twists;                  // N-2 [rad]

    int edge_count() const { return static_cast<int>(lengths.size()); }
    int interior_count() const { return static_cast<int>(twists.size()); }

    // Naive rest shape: freeze the current lengths, curvatures and twists.
    static RestShape from_state(const StrandState& state);

    void validate() const;  // throws NonPositiveRestLength
};

// Energies return joules; gradients accumulate into a full 4N-1 vector.
// Edge 0 carries no stretching energy (both of its vertices are clamped).
double stretch_energy(const EdgeData& edges, const RestShape& rest,
                      const MaterialParams& params);
void accumulate_stretch_gradient(const EdgeData& edges, const RestShape& rest,
                                 const MaterialParams& params, VecX& grad);

double bend_energy(const CurvatureSet& curvature, const RestShape& rest,
                   const MaterialParams& params);
void accumulate_bend_gradient(const EdgeData& edges, const FrameSet& frames,
                              const CurvatureSet& curvature, const RestShape& rest,
                              const MaterialParams& params, VecX& grad);

double twist_energy(const VecX& twist, const RestShape& rest, const MaterialParams& params);
void accumulate_twist_gradient(const EdgeData& edges, const CurvatureSet& curvature,
                               const VecX& twist, const RestShape& rest,
                               const MaterialParams& params, VecX& grad);

double elastic_energy(const StrandState& state, const FrameSet& frames,
                      const RestShape& rest, const MaterialParams& params);

// Gradient of the summed elastic energy over all 4N-1 DOFs (fixed entries
// populated but only meaningful through the free view).
VecX elastic_gradient(const StrandState& state, const FrameSet& frames,
                      const RestShape& rest, const MaterialParams& params);

// Generalized external force: m_i g on vertex DOFs plus per-vertex loads;
// angle DOFs carry nothing.
VecX external_force(const GeneralizedMass& mass, const ExternalLoad& load);

// Inertia objective E = ||q - q*||_M^2 / (2 dt^2) and its gradient, free view.
double inertia_energy(const VecX& q_free, const VecX& q_star_free, const VecX& mass_free,
                      double dt);
VecX inertia_gradient(const VecX& q_free, const VecX& q_star_free, const VecX& mass_free,
                      double dt);

// f = f_ext - grad(E_stretch + E_bend + E_twist), restricted to free DOFs.
VecX total_force_free(const StrandState& state, const FrameSet& frames,
                      const RestShape& rest, const MaterialParams& params,
                      const ExternalLoad& load, const GeneralizedMass& mass);

// Hessian of the elastic energy over free DOFs. The stretch blocks are
// analytic; bend/twist stencil blocks are centered differences of the
// analytic gradient (h = 1e-6), symmetrized. With project_psd each stencil
// block is eigenvalue-clamped at zero.
SparseMat elastic_hessian_free(const StrandState& state, const FrameSet& frames,
                               const RestShape& rest, const MaterialParams& params,
                               bool project_psd);

// Implicit-step system: PSD-projected elastic Hessian plus M/dt^2.
SparseMat newton_system(const StrandState& state, const FrameSet& frames,
                        const RestShape& rest, const MaterialParams& params,
                        const GeneralizedMass& mass, double dt);

}  // namespace sagrod
