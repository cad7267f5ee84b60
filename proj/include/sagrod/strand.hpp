#pragma once

#include "sagrod/types.hpp"

#include <vector>

namespace sagrod {

// Generalized coordinates q in R^{4N-1} interleave vertex positions and edge
// angles: [x_0, theta_0, x_1, theta_1, ..., theta_{N-2}, x_{N-1}].
// Vertex i occupies q[4i..4i+2], edge i's angle sits at q[4i+3].
// The root clamp fixes x_0, theta_0, x_1, i.e. exactly q[0..6]; the free
// block is q[7..4N-2] (4N-8 entries).
struct DofLayout {
    int n_vertices = 0;

    explicit DofLayout(int n) : n_vertices(n) {}
    int total() const { return 4 * n_vertices - 1; }
    int free_count() const { return total() - kFixedCount; }
    static int vertex_index(int i) { return 4 * i; }
    static int theta_index(int i) { return 4 * i + 3; }
    static bool is_free(int global_index) { return global_index >= kFixedCount; }
    static int to_free(int global_index) { return global_index - kFixedCount; }

    static constexpr int kFixedCount = 7;
};

struct StrandGeometry {
    std::vector<Vec3> vertices;  // N positions [m]
    VecX thetas;                 // N-1 edge angles [rad]

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int edge_count() const { return vertex_count() - 1; }
    int interior_count() const { return vertex_count() - 2; }

    // Throws ValidationError / DegenerateEdge / TangentReversal; checks
    // N >= 3, positive edge lengths and the turning-angle guard.
    void validate() const;
};

struct EdgeData {
    VecX lengths;               // N-1
    std::vector<Vec3> tangents; // N-1, unit
};

// Throws DegenerateEdge if any edge is shorter than kMinEdgeLength.
EdgeData compute_edges(const StrandGeometry& geometry);

struct ReferenceFrames {
    std::vector<Vec3> d1, d2;  // per edge, orthonormal with the tangent
};

// Rotates v by the rotation taking unit vector a to unit vector b (identity
// when a ~ b; throws TangentReversal when a ~ -b).
Vec3 parallel_transport(const Vec3& v, const Vec3& a, const Vec3& b);

// Signed angle from a to b about the unit axis, in (-pi, pi].
double signed_angle(const Vec3& a, const Vec3& b, const Vec3& axis);

// Space-parallel transport from a deterministic seed on edge 0: d1 is the
// normalized rejection of the global axis least aligned with t_0.
ReferenceFrames init_reference_frames(const EdgeData& edges);

// Time-parallel transport of each edge frame from its old tangent to the new
// one.
ReferenceFrames time_parallel_transport(const ReferenceFrames& frames,
                                        const std::vector<Vec3>& old_tangents,
                                        const std::vector<Vec3>& new_tangents);

struct FrameSet {
    std::vector<Vec3> m1, m2;  // material frames, per edge
};

FrameSet compute_material_frames(const ReferenceFrames& frames, const VecX& thetas);

struct StrandState {
    StrandGeometry geometry;
    EdgeData edges;
    ReferenceFrames frames;
    VecX reference_twist;  // N-2, per interior vertex
    VecX velocities;       // 4N-1 generalized, fixed entries mirror the script

    static StrandState create(StrandGeometry geometry);

    // Replaces the geometry, time-parallel transports the frames and updates
    // the reference twist incrementally (continuous across 2*pi).
    void set_geometry(StrandGeometry new_geometry);

    FrameSet material_frames() const { return compute_material_frames(frames, geometry.thetas); }
};

// Fresh reference twist: the angle rotating the space-parallel transport of
// edge i-1's frame onto edge i's frame, about t_i. Entry k is interior
// vertex k+1.
VecX compute_reference_twist(const EdgeData& edges, const ReferenceFrames& frames);

// Incremental variant staying continuous w.r.t. the previous values.
VecX update_reference_twist(const EdgeData& edges, const ReferenceFrames& frames,
                            const VecX& previous);

struct CurvatureSet {
    std::vector<Vec4> kappa;           // entry k is interior vertex k+1
    std::vector<Vec3> kappa_binormal;
};

// kb_i = 2 t_{i-1} x t_i / (1 + t_{i-1}.t_i); kappa projects kb onto the
// material frames of edges i-1 and i:
//   kappa_i = [kb.m2_{i-1}, -kb.m1_{i-1}, kb.m2_i, -kb.m1_i].
// The component convention is frozen here and validated against finite
// differences; downstream code treats kappa as opaque.
CurvatureSet compute_curvature(const EdgeData& edges, const FrameSet& frames);

// m_i = theta_i - theta_{i-1} + reference_twist_i. Entry k is vertex k+1.
VecX compute_twist(const StrandGeometry& geometry, const VecX& reference_twist);

// Jacobian of kappa_i w.r.t. the 11-stencil
// (x_{i-1}, theta_{i-1}, x_i, theta_i, x_{i+1}), frames following by
// parallel transport.
Mat4x11 curvature_gradient(const EdgeData& edges, const FrameSet& frames,
                           const CurvatureSet& curvature, int vertex);

// Gradient of m_i over the same stencil; theta parts are exactly (-1, +1),
// positional parts come from the transport holonomy: kb_i / (2 l).
Vec11 twist_gradient(const EdgeData& edges, const CurvatureSet& curvature, int vertex);

struct GeneralizedMass {
    // Diagonal over all 4N-1 DOFs; the clamped entries (q[0..6]) are stored
    // as zeros and must only ever be read through the free view.
    VecX diag;

    int n_vertices = 0;
    double vertex_mass(int i) const { return diag[DofLayout::vertex_index(i)]; }
    double edge_inertia(int i) const { return diag[DofLayout::theta_index(i)]; }
    VecX free_diag() const { return diag.tail(diag.size() - DofLayout::kFixedCount); }
};

// m_i = rho pi r^2 (lbar_{i-1} + lbar_i)/2 with lbar_{-1} = lbar_{N-1} = 0,
// I_i = rho pi r^4 lbar_i / 2. Fixed DOFs get marker zeros, not infinities.
GeneralizedMass build_mass_matrix(const VecX& rest_lengths, const MaterialParams& params);

// Full generalized position vector of a geometry and its inverse.
VecX pack_positions(const StrandGeometry& geometry);
StrandGeometry unpack_positions(const VecX& q, int n_vertices);

}  // namespace sagrod
