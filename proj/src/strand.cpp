#include "sagrod/strand.hpp"

#include <cmath>

namespace sagrod {

void MaterialParams::validate() const {
    if (!(rho > 0.0) || !(radius > 0.0) || !(c_stretch > 0.0) || !(c_bend > 0.0) ||
        !(c_twist > 0.0)) {
        throw ValidationError("material parameters must be strictly positive");
    }
}

DegenerateEdge::DegenerateEdge(int e, double length)
    : Error("degenerate edge " + std::to_string(e) + " (length " + std::to_string(length) +
            ")"),
      edge(e) {}

TangentReversal::TangentReversal(int v)
    : Error("tangent near-reversal at interior vertex " + std::to_string(v)), vertex(v) {}

NonPositiveRestLength::NonPositiveRestLength(int e, double value)
    : Error("non-positive rest length " + std::to_string(value) + " on edge " +
            std::to_string(e)),
      edge(e) {}

ParseError::ParseError(const std::string& what, int l)
    : Error("line " + std::to_string(l) + ": " + what), line(l) {}

UnknownScenario::UnknownScenario(const std::string& name)
    : Error("unknown scenario: " + name) {}

void StrandGeometry::validate() const {
    if (vertex_count() < 3) {
        throw ValidationError("strand needs at least 3 vertices, got " +
                              std::to_string(vertex_count()));
    }
    if (thetas.size() != edge_count()) {
        throw ValidationError("expected " + std::to_string(edge_count()) +
                              " edge angles, got " + std::to_string(thetas.size()));
    }
    const EdgeData edges = compute_edges(*this);
    for (int i = 1; i < vertex_count() - 1; ++i) {
        const double chi = 1.0 + edges.tangents[i - 1].dot(edges.tangents[i]);
        if (chi <= kTangentGuard) throw TangentReversal(i);
    }
}

EdgeData compute_edges(const StrandGeometry& geometry) {
    const int ne = geometry.edge_count();
    EdgeData edges;
    edges.lengths.resize(ne);
    edges.tangents.resize(ne);
    for (int i = 0; i < ne; ++i) {
        const Vec3 e = geometry.vertices[i + 1] - geometry.vertices[i];
        const double l = e.norm();
        if (l <= kMinEdgeLength) throw DegenerateEdge(i, l);
        edges.lengths[i] = l;
        edges.tangents[i] = e / l;
    }
    return edges;
}

Vec3 parallel_transport(const Vec3& v, const Vec3& a, const Vec3& b) {
    const Vec3 axis = a.cross(b);
    const double s = axis.norm();
    const double c = a.dot(b);
    if (s < 1e-12) {
        if (c > 0.0) return v;
        throw TangentReversal(-1);
    }
    const Vec3 n = axis / s;
    const double angle = std::atan2(s, c);
    // Rodrigues rotation about n by angle.
    return v * std::cos(angle) + n.cross(v) * std::sin(angle) +
           n * (n.dot(v)) * (1.0 - std::cos(angle));
}

double signed_angle(const Vec3& a, const Vec3& b, const Vec3& axis) {
    return std::atan2(axis.dot(a.cross(b)), a.dot(b));
}

namespace {

Vec3 seed_frame_vector(const Vec3& t0) {
    int best = 0;
    double best_dot = std::abs(t0[0]);
    for (int k = 1; k < 3; ++k) {
        if (std::abs(t0[k]) < best_dot) {
            best_dot = std::abs(t0[k]);
            best = k;
        }
    }
    const Vec3 axis = Vec3::Unit(best);
    const Vec3 rejected = axis - axis.dot(t0) * t0;
    return rejected.normalized();
}

// Transport drifts at roundoff level; pin d1 back onto the tangent plane.
void reorthonormalize(Vec3& d1, Vec3& d2, const Vec3& t) {
    d1 -= d1.dot(t) * t;
    d1.normalize();
    d2 = t.cross(d1);
}

}  // namespace

ReferenceFrames init_reference_frames(const EdgeData& edges) {
    const int ne = static_cast<int>(edges.tangents.size());
    ReferenceFrames frames;
    frames.d1.resize(ne);
    frames.d2.resize(ne);
    frames.d1[0] = seed_frame_vector(edges.tangents[0]);
    frames.d2[0] = edges.tangents[0].cross(frames.d1[0]);
    for (int i = 1; i < ne; ++i) {
        try {
            frames.d1[i] = parallel_transport(frames.d1[i - 1], edges.tangents[i - 1],
                                              edges.tangents[i]);
        } catch (const TangentReversal&) {
            throw TangentReversal(i);
        }
        reorthonormalize(frames.d1[i], frames.d2[i], edges.tangents[i]);
    }
    return frames;
}

ReferenceFrames time_parallel_transport(const ReferenceFrames& frames,
                                        const std::vector<Vec3>& old_tangents,
                                        const std::vector<Vec3>& new_tangents) {
    const int ne = static_cast<int>(old_tangents.size());
    ReferenceFrames out;
    out.d1.resize(ne);
    out.d2.resize(ne);
    for (int i = 0; i < ne; ++i) {
        try {
            out.d1[i] = parallel_transport(frames.d1[i], old_tangents[i], new_tangents[i]);
        } catch (const TangentReversal&) {
            throw DegenerateEdge(i, 0.0);
        }
        reorthonormalize(out.d1[i], out.d2[i], new_tangents[i]);
    }
    return out;
}

FrameSet compute_material_frames(const ReferenceFrames& frames, const VecX& thetas) {
    const int ne = static_cast<int>(frames.d1.size());
    FrameSet mat;
    mat.m1.resize(ne);
    mat.m2.resize(ne);
    for (int i = 0; i < ne; ++i) {
        const double c = std::cos(thetas[i]);
        const double s = std::sin(thetas[i]);
        mat.m1[i] = c * frames.d1[i] + s * frames.d2[i];
        mat.m2[i] = -s * frames.d1[i] + c * frames.d2[i];
    }
    return mat;
}

VecX compute_reference_twist(const EdgeData& edges, const ReferenceFrames& frames) {
    const int ni = static_cast<int>(edges.tangents.size()) - 1;
    VecX twist(ni);
    for (int k = 0; k < ni; ++k) {
        const int i = k + 1;
        const Vec3 u = parallel_transport(frames.d1[i - 1], edges.tangents[i - 1],
                                          edges.tangents[i]);
        twist[k] = signed_angle(u, frames.d1[i], edges.tangents[i]);
    }
    return twist;
}

VecX update_reference_twist(const EdgeData& edges, const ReferenceFrames& frames,
                            const VecX& previous) {
    const int ni = static_cast<int>(edges.tangents.size()) - 1;
    VecX twist(ni);
    for (int k = 0; k < ni; ++k) {
        const int i = k + 1;
        Vec3 u = parallel_transport(frames.d1[i - 1], edges.tangents[i - 1],
                                    edges.tangents[i]);
        // Start from the previous estimate so the result stays continuous
        // instead of wrapping into (-pi, pi].
        const Vec3 t = edges.tangents[i];
        const double base = previous[k];
        const double c = std::cos(base);
        const double s = std::sin(base);
        u = c * u + s * t.cross(u) + (1.0 - c) * t.dot(u) * t;
        twist[k] = base + signed_angle(u, frames.d1[i], t);
    }
    return twist;
}

StrandState StrandState::create(StrandGeometry geometry) {
    geometry.validate();
    StrandState state;
    state.geometry = std::move(geometry);
    state.edges = compute_edges(state.geometry);
    state.frames = init_reference_frames(state.edges);
    state.reference_twist = compute_reference_twist(state.edges, state.frames);
    state.velocities = VecX::Zero(4 * state.geometry.vertex_count() - 1);
    return state;
}

void StrandState::set_geometry(StrandGeometry new_geometry) {
    const EdgeData new_edges = compute_edges(new_geometry);
    frames = time_parallel_transport(frames, edges.tangents, new_edges.tangents);
    geometry = std::move(new_geometry);
    edges = new_edges;
    reference_twist = update_reference_twist(edges, frames, reference_twist);
}

CurvatureSet compute_curvature(const EdgeData& edges, const FrameSet& frames) {
    const int ni = static_cast<int>(edges.tangents.size()) - 1;
    CurvatureSet out;
    out.kappa.resize(ni);
    out.kappa_binormal.resize(ni);
    for (int k = 0; k < ni; ++k) {
        const int i = k + 1;
        const Vec3& te = edges.tangents[i - 1];
        const Vec3& tf = edges.tangents[i];
        const double chi = 1.0 + te.dot(tf);
        if (chi <= kTangentGuard) throw TangentReversal(i);
        const Vec3 kb = 2.0 * te.cross(tf) / chi;
        out.kappa_binormal[k] = kb;
        out.kappa[k] = Vec4(kb.dot(frames.m2[i - 1]), -kb.dot(frames.m1[i - 1]),
                            kb.dot(frames.m2[i]), -kb.dot(frames.m1[i]));
    }
    return out;
}

VecX compute_twist(const StrandGeometry& geometry, const VecX& reference_twist) {
    const int ni = geometry.interior_count();
    VecX m(ni);
    for (int k = 0; k < ni; ++k) {
        const int i = k + 1;
        m[k] = geometry.thetas[i] - geometry.thetas[i - 1] + reference_twist[k];
    }
    return m;
}

Mat4x11 curvature_gradient(const EdgeData& edges, const FrameSet& frames,
                           const CurvatureSet& curvature, int vertex) {
    const int i = vertex;
    const Vec3& te = edges.tangents[i - 1];
    const Vec3& tf = edges.tangents[i];
    const double le = edges.lengths[i - 1];
    const double lf = edges.lengths[i];
    const double chi = 1.0 + te.dot(tf);
    if (chi <= kTangentGuard) throw TangentReversal(i);

    const Vec3 tilde_t = (te + tf) / chi;
    const Vec3 tilde_m1e = 2.0 * frames.m1[i - 1] / chi;
    const Vec3 tilde_m2e = 2.0 * frames.m2[i - 1] / chi;
    const Vec3 tilde_m1f = 2.0 * frames.m1[i] / chi;
    const Vec3 tilde_m2f = 2.0 * frames.m2[i] / chi;

    const Vec4& kappa = curvature.kappa[i - 1];
    const Vec3& kb = curvature.kappa_binormal[i - 1];

    // Derivatives w.r.t. the two edge vectors; rows scatter to vertices as
    // d/dx_{i-1} = -d/de, d/dx_i = d/de - d/df, d/dx_{i+1} = d/df.
    Mat4x11 grad = Mat4x11::Zero();
    const auto scatter = [&grad](int row, const Vec3& d_de, const Vec3& d_df) {
        grad.block<1, 3>(row, 0) = -d_de.transpose();
        grad.block<1, 3>(row, 4) = (d_de - d_df).transpose();
        grad.block<1, 3>(row, 8) = d_df.transpose();
    };
    scatter(0, (-kappa[0] * tilde_t + tf.cross(tilde_m2e)) / le,
            (-kappa[0] * tilde_t - te.cross(tilde_m2e)) / lf);
    scatter(1, (-kappa[1] * tilde_t - tf.cross(tilde_m1e)) / le,
            (-kappa[1] * tilde_t + te.cross(tilde_m1e)) / lf);
    scatter(2, (-kappa[2] * tilde_t + tf.cross(tilde_m2f)) / le,
            (-kappa[2] * tilde_t - te.cross(tilde_m2f)) / lf);
    scatter(3, (-kappa[3] * tilde_t - tf.cross(tilde_m1f)) / le,
            (-kappa[3] * tilde_t + te.cross(tilde_m1f)) / lf);

    // Each 2D curvature pair depends only on its own edge's material frame.
    grad(0, 3) = -kb.dot(frames.m1[i - 1]);
    grad(1, 3) = -kb.dot(frames.m2[i - 1]);
    grad(2, 7) = -kb.dot(frames.m1[i]);
    grad(3, 7) = -kb.dot(frames.m2[i]);
    return grad;
}

Vec11 twist_gradient(const EdgeData& edges, const CurvatureSet& curvature, int vertex) {
    const int i = vertex;
    const Vec3& kb = curvature.kappa_binormal[i - 1];
    Vec11 grad = Vec11::Zero();
    const Vec3 d_de = kb / (2.0 * edges.lengths[i - 1]);
    const Vec3 d_df = kb / (2.0 * edges.lengths[i]);
    grad.segment<3>(0) = -d_de;
    grad.segment<3>(4) = d_de - d_df;
    grad.segment<3>(8) = d_df;
    grad[3] = -1.0;
    grad[7] = 1.0;
    return grad;
}

GeneralizedMass build_mass_matrix(const VecX& rest_lengths, const MaterialParams& params) {
    const int ne = static_cast<int>(rest_lengths.size());
    const int n = ne + 1;
    for (int i = 0; i < ne; ++i) {
        if (!(rest_lengths[i] > 0.0)) throw NonPositiveRestLength(i, rest_lengths[i]);
    }
    GeneralizedMass mass;
    mass.n_vertices = n;
    mass.diag = VecX::Zero(4 * n - 1);
    const double rho_a = params.rho * params.area();
    const double rho_i = 0.5 * params.rho * kPi * std::pow(params.radius, 4);
    for (int i = 2; i < n; ++i) {
        const double l_prev = rest_lengths[i - 1];
        const double l_next = (i < ne) ? rest_lengths[i] : 0.0;
        mass.diag.segment<3>(DofLayout::vertex_index(i))
            .setConstant(rho_a * 0.5 * (l_prev + l_next));
    }
    for (int i = 1; i < ne; ++i) {
        mass.diag[DofLayout::theta_index(i)] = rho_i * rest_lengths[i];
    }
    return mass;
}

VecX pack_positions(const StrandGeometry& geometry) {
    const int n = geometry.vertex_count();
    VecX q(4 * n - 1);
    for (int i = 0; i < n; ++i) q.segment<3>(DofLayout::vertex_index(i)) = geometry.vertices[i];
    for (int i = 0; i < n - 1; ++i) q[DofLayout::theta_index(i)] = geometry.thetas[i];
    return q;
}

StrandGeometry unpack_positions(const VecX& q, int n_vertices) {
    StrandGeometry geometry;
    geometry.vertices.resize(n_vertices);
    geometry.thetas.resize(n_vertices - 1);
    for (int i = 0; i < n_vertices; ++i) {
        geometry.vertices[i] = q.segment<3>(DofLayout::vertex_index(i));
    }
    for (int i = 0; i < n_vertices - 1; ++i) geometry.thetas[i] = q[DofLayout::theta_index(i)];
    return geometry;
}

}  // namespace sagrod
