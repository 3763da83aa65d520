#pragma once
// Lagrangian submanifolds as atlases of parametrized rectangle patches:
// omega-defect measurement, combinatorial surface topology (Euler
// characteristic, orientability) from geometrically welded patch grids,
// coordinate-line tracing, and nearest-point queries.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "ambient.hpp"
#include "errors.hpp"
#include "linalg.hpp"

namespace lagsurg {

struct Patch {
    std::string name;
    ChartId chart;
    std::array<double, 2> u_range{0.0, 1.0};
    std::array<double, 2> v_range{0.0, 1.0};
    std::function<C2(double, double)> f;
    /// Optional analytic Jacobian: returns (df/du, df/dv).
    std::function<std::array<C2, 2>(double, double)> df;
    bool deck_twin = false;  // second member of a deck pair; skipped by traces

    C2 eval(double u, double v) const { return f(u, v); }
    ChartPoint at(double u, double v) const { return {chart, f(u, v)}; }
    HomogeneousPoint ambient(double u, double v) const { return chart_embed(at(u, v)); }
    double diam() const {
        return std::max(u_range[1] - u_range[0], v_range[1] - v_range[0]);
    }
};

/// Default finite-difference step for patch Jacobians.
inline double default_fd_step(const Patch& p) { return 1e-5 * p.diam(); }

inline std::array<C2, 2> patch_jacobian(const Patch& p, double u, double v, double fd_step = 0.0) {
    if (p.df && fd_step == 0.0) return p.df(u, v);
    double h = fd_step > 0.0 ? fd_step : default_fd_step(p);
    C2 fu = (1.0 / (2 * h)) * (p.f(u + h, v) - p.f(u - h, v));
    C2 fv = (1.0 / (2 * h)) * (p.f(u, v + h) - p.f(u, v - h));
    return {fu, fv};
}

// ---------------------------------------------------------------------------
// omega-defect

/// Max over an n x n cell-center grid of |omega(f_u, f_v)| / (|f_u||f_v||omega|).
/// fd_step = 0 uses the analytic Jacobian when present, else the default step.
inline double lagrangian_defect(const AmbientSpace& sp, const Patch& p, int n = 64,
                                double fd_step = 0.0) {
    if (n < 8) throw InadmissibleParameters("defect grid must be at least 8x8");
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        double u = p.u_range[0] + (p.u_range[1] - p.u_range[0]) * (i + 0.5) / n;
        for (int j = 0; j < n; ++j) {
            double v = p.v_range[0] + (p.v_range[1] - p.v_range[0]) * (j + 0.5) / n;
            auto J = patch_jacobian(p, u, v, fd_step);
            double n0 = norm(J[0]), n1 = norm(J[1]), d = dot_re(J[0], J[1]);
            double tr = n0 * n0 + n1 * n1;
            double det = n0 * n0 * n1 * n1 - d * d;
            double lam_min = 0.5 * (tr - std::sqrt(std::max(0.0, tr * tr - 4 * det)));
            if (lam_min <= 1e-16 * tr)
                throw DegenerateJacobian(p.name + " at grid point: rank < 2");
            ChartPoint cp = p.at(u, v);
            double w = std::abs(fubini_study(sp, cp, J[0], J[1]));
            double defect = w / (n0 * n1 * fs_operator_norm(sp, cp));
            worst = std::max(worst, defect);
        }
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Atlas

struct DeckRecord {
    int a, b;            // patch indices identified pointwise
    bool rev_u, rev_v;   // parameter transform from a to b
};

struct GluingRecord {
    int patch_a, edge_a;  // edges: 0 south (v=v0), 1 east (u=u1), 2 north (v=v1), 3 west (u=u0)
    int patch_b, edge_b;
    bool reversed;
    double max_gap;
};

struct LagrangianAtlas {
    AmbientSpace space;
    std::string label;
    std::vector<Patch> patches;
    std::vector<DeckRecord> deck;

    const Patch& patch(int i) const { return patches[size_t(i)]; }
};

namespace detail {

/// Continuous canonical embedding of a projective point (density matrix
/// entries), used for proximity welding and hashing.
inline std::array<double, 18> canon_embed(const HomogeneousPoint& h) {
    std::array<double, 18> out{};
    int pos = 0;
    auto emit = [&](const cplx* z, int n) {
        double s = 0;
        for (int i = 0; i < n; ++i) s += std::norm(z[i]);
        double inv = 1.0 / s;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) {
                cplx p = z[i] * std::conj(z[j]) * inv;
                out[pos++] = p.real();
                if (j > i) out[pos++] = p.imag();
            }
    };
    if (h.kind == SpaceKind::CP2)
        emit(h.z.data(), 3);
    else {
        emit(h.z.data(), 2);
        emit(h.z.data() + 2, 2);
    }
    return out;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace detail

struct SurfaceMesh {
    int vertices = 0, edges = 0, faces = 0;
    int euler = 0;
    int components = 0;
    bool orientable = false;
    bool closed = false;
    double max_glue_gap = 0.0;
    std::vector<GluingRecord> gluings;
};

/// Assemble the glued surface complex by sampling every patch on an n x n grid
/// and welding: deck records identify whole grids; boundary vertices weld by
/// ambient proximity. Faces identical after welding (deck twins) are deduped.
inline SurfaceMesh build_mesh(const LagrangianAtlas& atlas, int n = 12, double weld_tol = 1e-7) {
    const int np = int(atlas.patches.size());
    const int stride = (n + 1) * (n + 1);
    auto vid = [&](int p, int i, int j) { return p * stride + i * (n + 1) + j; };

    std::vector<HomogeneousPoint> pts;
    pts.reserve(size_t(np) * stride);
    for (const Patch& p : atlas.patches)
        for (int i = 0; i <= n; ++i) {
            double u = p.u_range[0] + (p.u_range[1] - p.u_range[0]) * i / n;
            for (int j = 0; j <= n; ++j) {
                double v = p.v_range[0] + (p.v_range[1] - p.v_range[0]) * j / n;
                pts.push_back(p.ambient(u, v));
            }
        }

    detail::UnionFind uf(pts.size());
    for (const DeckRecord& d : atlas.deck)
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                uf.unite(vid(d.a, i, j), vid(d.b, d.rev_u ? n - i : i, d.rev_v ? n - j : j));

    // Boundary proximity weld via a sort-and-scan on the canonical embedding.
    struct BV {
        std::array<double, 18> e;
        int id;
        int patch, edge, pos;  // edge-local bookkeeping for gluing records
    };
    std::vector<BV> bvs;
    for (int p = 0; p < np; ++p)
        for (int k = 0; k <= n; ++k) {
            bvs.push_back({detail::canon_embed(pts[size_t(vid(p, k, 0))]), vid(p, k, 0), p, 0, k});
            bvs.push_back({detail::canon_embed(pts[size_t(vid(p, n, k))]), vid(p, n, k), p, 1, k});
            bvs.push_back({detail::canon_embed(pts[size_t(vid(p, k, n))]), vid(p, k, n), p, 2, k});
            bvs.push_back({detail::canon_embed(pts[size_t(vid(p, 0, k))]), vid(p, 0, k), p, 3, k});
        }
    std::sort(bvs.begin(), bvs.end(), [](const BV& a, const BV& b) { return a.e[0] < b.e[0]; });
    double max_gap = 0.0;
    for (size_t i = 0; i < bvs.size(); ++i)
        for (size_t j = i + 1; j < bvs.size() && bvs[j].e[0] - bvs[i].e[0] <= weld_tol; ++j) {
            double d2 = 0;
            for (int k = 0; k < 18; ++k) {
                double t = bvs[i].e[k] - bvs[j].e[k];
                d2 += t * t;
                if (d2 > weld_tol * weld_tol) break;
            }
            if (d2 <= weld_tol * weld_tol) {
                uf.unite(bvs[i].id, bvs[j].id);
                max_gap = std::max(max_gap, proj_distance(pts[size_t(bvs[i].id)], pts[size_t(bvs[j].id)]));
            }
        }

    // Faces with welded corner ids, deduped by canonical key.
    struct Face {
        std::array<int, 4> cyc;  // corner roots in parameter-orientation order
    };
    std::map<std::array<int, 4>, Face> faces;  // key: sorted corners
    bool degenerate_face = false;
    for (int p = 0; p < np; ++p)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                std::array<int, 4> cyc = {uf.find(vid(p, i, j)), uf.find(vid(p, i + 1, j)),
                                          uf.find(vid(p, i + 1, j + 1)), uf.find(vid(p, i, j + 1))};
                std::array<int, 4> key = cyc;
                std::sort(key.begin(), key.end());
                if (key[0] == key[1] || key[1] == key[2] || key[2] == key[3]) {
                    degenerate_face = true;
                    continue;
                }
                faces.emplace(key, Face{cyc});
            }
    if (degenerate_face) throw DegenerateJacobian(atlas.label + ": collapsed mesh face");

    // Edge -> adjacent faces (with traversal direction).
    struct EdgeUse {
        int face;
        bool forward;
    };
    std::map<std::pair<int, int>, std::vector<EdgeUse>> edge_faces;
    std::vector<const Face*> flist;
    flist.reserve(faces.size());
    for (auto& kv : faces) flist.push_back(&kv.second);
    for (int fi = 0; fi < int(flist.size()); ++fi)
        for (int s = 0; s < 4; ++s) {
            int a = flist[size_t(fi)]->cyc[size_t(s)], b = flist[size_t(fi)]->cyc[size_t((s + 1) % 4)];
            bool fwd = a < b;
            edge_faces[{std::min(a, b), std::max(a, b)}].push_back({fi, fwd});
        }

    SurfaceMesh mesh;
    mesh.faces = int(faces.size());
    mesh.edges = int(edge_faces.size());
    std::vector<int> used;
    for (auto& kv : faces)
        for (int c : kv.second.cyc) used.push_back(c);
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    mesh.vertices = int(used.size());
    mesh.euler = mesh.vertices - mesh.edges + mesh.faces;
    mesh.max_glue_gap = max_gap;

    mesh.closed = true;
    for (auto& kv : edge_faces) {
        if (kv.second.size() > 2)
            throw OpenBoundary(atlas.label + ": edge bordered by more than two faces");
        if (kv.second.size() < 2) mesh.closed = false;
    }

    // Orientability: propagate face orientations; adjacent faces must traverse
    // the shared edge in opposite directions.
    std::vector<int> orient(flist.size(), 0);
    mesh.orientable = true;
    for (size_t seed = 0; seed < flist.size(); ++seed) {
        if (orient[seed] != 0) continue;
        ++mesh.components;
        orient[seed] = 1;
        std::vector<int> stack{int(seed)};
        while (!stack.empty()) {
            int f = stack.back();
            stack.pop_back();
            const Face& fc = *flist[size_t(f)];
            for (int s = 0; s < 4; ++s) {
                int a = fc.cyc[size_t(s)], b = fc.cyc[size_t((s + 1) % 4)];
                auto& uses = edge_faces[{std::min(a, b), std::max(a, b)}];
                for (const EdgeUse& eu : uses) {
                    if (eu.face == f) continue;
                    bool my_fwd = a < b;
                    // Same traversal direction from both faces => orientations opposite.
                    int needed = (eu.forward == my_fwd) ? -orient[f] : orient[f];
                    if (orient[eu.face] == 0) {
                        orient[eu.face] = needed;
                        stack.push_back(eu.face);
                    } else if (orient[eu.face] != needed) {
                        mesh.orientable = false;
                    }
                }
            }
        }
    }

    // Derive gluing records: boundary edges whose sample sequences weld pairwise.
    struct EdgeKey {
        int patch, edge;
    };
    std::map<std::pair<int, int>, std::vector<int>> edge_roots;  // (patch,edge) -> roots along it
    for (const BV& bv : bvs) {
        auto& v = edge_roots[{bv.patch, bv.edge}];
        v.resize(size_t(n + 1), -1);
        v[size_t(bv.pos)] = uf.find(bv.id);
    }
    std::vector<std::pair<int, int>> keys;
    for (auto& kv : edge_roots) keys.push_back(kv.first);
    for (size_t i = 0; i < keys.size(); ++i)
        for (size_t j = i + 1; j < keys.size(); ++j) {
            auto &A = edge_roots[keys[i]], &B = edge_roots[keys[j]];
            bool fwd = true, rev = true;
            for (int k = 0; k <= n; ++k) {
                if (A[size_t(k)] != B[size_t(k)]) fwd = false;
                if (A[size_t(k)] != B[size_t(n - k)]) rev = false;
            }
            if (fwd || rev)
                mesh.gluings.push_back({keys[i].first, keys[i].second, keys[j].first,
                                        keys[j].second, rev && !fwd, max_gap});
        }
    return mesh;
}

inline int euler_characteristic(const LagrangianAtlas& atlas, int n = 12) {
    SurfaceMesh m = build_mesh(atlas, n);
    if (!m.closed) throw OpenBoundary(atlas.label + ": unglued boundary edge");
    return m.euler;
}

inline bool orientable(const LagrangianAtlas& atlas, int n = 12) {
    SurfaceMesh m = build_mesh(atlas, n);
    if (!m.closed) throw OpenBoundary(atlas.label + ": unglued boundary edge");
    return m.orientable;
}

/// Max atlas omega-defect over all patches.
inline double atlas_defect(const LagrangianAtlas& atlas, int n = 64, double fd_step = 0.0) {
    double worst = 0.0;
    for (const Patch& p : atlas.patches)
        worst = std::max(worst, lagrangian_defect(atlas.space, p, n, fd_step));
    return worst;
}

// ---------------------------------------------------------------------------
// Nearest point

struct NearestResult {
    double distance;
    int patch;
    double u, v;
};

namespace detail {

/// Smooth squared-distance surrogate: sum over factors of the Gram-wedge
/// ratio |x^y|^2/(|x|^2|y|^2); vanishes exactly at projective coincidence.
inline double wedge_mismatch(const HomogeneousPoint& a, const HomogeneousPoint& b) {
    auto f = [](const cplx* x, const cplx* y, int n) {
        double nx = 0, ny = 0, w = 0;
        for (int i = 0; i < n; ++i) {
            nx += std::norm(x[i]);
            ny += std::norm(y[i]);
            for (int j = i + 1; j < n; ++j) w += std::norm(x[i] * y[j] - x[j] * y[i]);
        }
        return w / (nx * ny);
    };
    if (a.kind == SpaceKind::CP2) return f(a.z.data(), b.z.data(), 3);
    return f(a.z.data(), b.z.data(), 2) + f(a.z.data() + 2, b.z.data() + 2, 2);
}

}  // namespace detail

/// Nearest point of the atlas to a target: coarse grid scan plus damped
/// Newton refinement on the smooth mismatch.
inline NearestResult nearest_point(const LagrangianAtlas& atlas, const HomogeneousPoint& target,
                                   int scan = 48) {
    NearestResult best{1e300, -1, 0, 0};
    for (int pi = 0; pi < int(atlas.patches.size()); ++pi) {
        const Patch& p = atlas.patches[size_t(pi)];
        for (int i = 0; i <= scan; ++i)
            for (int j = 0; j <= scan; ++j) {
                double u = p.u_range[0] + (p.u_range[1] - p.u_range[0]) * i / scan;
                double v = p.v_range[0] + (p.v_range[1] - p.v_range[0]) * j / scan;
                double m = detail::wedge_mismatch(p.ambient(u, v), target);
                if (m < best.distance) best = {m, pi, u, v};
            }
    }
    const Patch& p = atlas.patches[size_t(best.patch)];
    double hu = (p.u_range[1] - p.u_range[0]) / (8.0 * scan);
    double hv = (p.v_range[1] - p.v_range[0]) / (8.0 * scan);
    auto F = [&](double u, double v) { return detail::wedge_mismatch(p.ambient(u, v), target); };
    double u = best.u, v = best.v, f0 = best.distance;
    for (int it = 0; it < 60; ++it) {
        double fu = (F(u + hu, v) - F(u - hu, v)) / (2 * hu);
        double fv = (F(u, v + hv) - F(u, v - hv)) / (2 * hv);
        double fuu = (F(u + hu, v) - 2 * f0 + F(u - hu, v)) / (hu * hu);
        double fvv = (F(u, v + hv) - 2 * f0 + F(u, v - hv)) / (hv * hv);
        double fuv = (F(u + hu, v + hv) - F(u + hu, v - hv) - F(u - hu, v + hv) +
                      F(u - hu, v - hv)) /
                     (4 * hu * hv);
        double det = fuu * fvv - fuv * fuv;
        double du, dv;
        if (det > 0 && fuu > 0) {
            du = -(fvv * fu - fuv * fv) / det;
            dv = -(fuu * fv - fuv * fu) / det;
        } else {
            double g = std::sqrt(fu * fu + fv * fv) + 1e-300;
            du = -fu / g * hu;
            dv = -fv / g * hv;
        }
        double step = 1.0;
        for (int bt = 0; bt < 20; ++bt, step *= 0.5) {
            double uu = std::clamp(u + step * du, p.u_range[0], p.u_range[1]);
            double vv = std::clamp(v + step * dv, p.v_range[0], p.v_range[1]);
            double f1 = F(uu, vv);
            if (f1 < f0) {
                u = uu;
                v = vv;
                f0 = f1;
                break;
            }
        }
        if (f0 < 1e-28) break;
    }
    double w = std::min(1.0, f0);
    double d = std::sqrt(2.0 * w / (1.0 + std::sqrt(std::max(0.0, 1.0 - w))));
    return {d, best.patch, u, v};
}

// ---------------------------------------------------------------------------
// Coordinate-line tracing

/// A coordinate projective line: the vanishing locus of one homogeneous
/// coordinate (of one factor, for the product).
struct CoordLine {
    int factor = 0;  // CP2: always 0
    int coord = 0;   // which homogeneous coordinate of that factor vanishes
};

struct TracedCurve {
    std::vector<HomogeneousPoint> points;
    bool closed = false;
};

namespace detail {

inline cplx line_value(const HomogeneousPoint& h, const CoordLine& line) {
    if (h.kind == SpaceKind::CP2) {
        double s = norm(C3{h.z[0], h.z[1], h.z[2]});
        return h.z[size_t(line.coord)] / s;
    }
    double s = std::sqrt(std::norm(h.z[2 * line.factor]) + std::norm(h.z[2 * line.factor + 1]));
    return h.z[size_t(2 * line.factor + line.coord)] / s;
}

}  // namespace detail

/// Connected components of the intersection of the atlas image with a
/// coordinate line. Marching on patch grids, Gauss-Newton refinement to
/// |value| <= 1e-10, cell-adjacency chaining, cross-patch merging.
inline std::vector<TracedCurve> restrict_to_line(const LagrangianAtlas& atlas,
                                                 const CoordLine& line, int n = 64) {
    struct Pt {
        HomogeneousPoint h;
        int patch, ci, cj;
        double u, v;
        double k1, k2;  // curve tangent direction in parameter units
    };
    std::vector<Pt> found;
    std::vector<std::vector<int>> per_patch(atlas.patches.size());

    for (int pi = 0; pi < int(atlas.patches.size()); ++pi) {
        const Patch& p = atlas.patches[size_t(pi)];
        if (p.deck_twin) continue;
        std::vector<double> mag((size_t(n) + 1) * (size_t(n) + 1));
        auto uu = [&](int i) { return p.u_range[0] + (p.u_range[1] - p.u_range[0]) * i / n; };
        auto vv = [&](int j) { return p.v_range[0] + (p.v_range[1] - p.v_range[0]) * j / n; };
        for (int i = 0; i <= n; ++i)
            for (int j = 0; j <= n; ++j)
                mag[size_t(i * (n + 1) + j)] = std::abs(detail::line_value(p.ambient(uu(i), vv(j)), line));
        double hu = (p.u_range[1] - p.u_range[0]) / n, hv = (p.v_range[1] - p.v_range[0]) / n;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double c00 = mag[size_t(i * (n + 1) + j)], c10 = mag[size_t((i + 1) * (n + 1) + j)];
                double c01 = mag[size_t(i * (n + 1) + j + 1)], c11 = mag[size_t((i + 1) * (n + 1) + j + 1)];
                double cmin = std::min({c00, c10, c01, c11});
                double cmax = std::max({c00, c10, c01, c11});
                if (cmin > 1.5 * (cmax - cmin) + 1e-13) continue;
                // Gauss-Newton from the cell center on (Re, Im) of the value.
                double u = uu(i) + hu / 2, v = vv(j) + hv / 2;
                double start = std::abs(detail::line_value(p.ambient(u, v), line));
                double val = start;
                double ta = 0, tb = 0;  // kernel direction of the value Jacobian
                for (int it = 0; it < 40 && val > 1e-12; ++it) {
                    cplx w0 = detail::line_value(p.ambient(u, v), line);
                    double du_ = hu * 1e-4, dv_ = hv * 1e-4;
                    cplx wu = (detail::line_value(p.ambient(u + du_, v), line) -
                               detail::line_value(p.ambient(u - du_, v), line)) /
                              (2 * du_);
                    cplx wv = (detail::line_value(p.ambient(u, v + dv_), line) -
                               detail::line_value(p.ambient(u, v - dv_), line)) /
                              (2 * dv_);
                    // least-squares step for the 2x2 real system
                    double a = wu.real(), b = wv.real(), c = wu.imag(), d = wv.imag();
                    double g1 = a * w0.real() + c * w0.imag(), g2 = b * w0.real() + d * w0.imag();
                    double m11 = a * a + c * c, m12 = a * b + c * d, m22 = b * b + d * d;
                    double reg = 1e-12 * (m11 + m22);
                    double det = (m11 + reg) * (m22 + reg) - m12 * m12;
                    double su = -((m22 + reg) * g1 - m12 * g2) / det;
                    double sv = -((m11 + reg) * g2 - m12 * g1) / det;
                    double lim = 1.5;
                    su = std::clamp(su, -lim * hu, lim * hu);
                    sv = std::clamp(sv, -lim * hv, lim * hv);
                    u = std::clamp(u + su, p.u_range[0], p.u_range[1]);
                    v = std::clamp(v + sv, p.v_range[0], p.v_range[1]);
                    val = std::abs(detail::line_value(p.ambient(u, v), line));
                    // dominant-row kernel of [[a,b],[c,d]], scaled to one cell
                    double k1, k2;
                    if (a * a + b * b >= c * c + d * d) {
                        k1 = b;
                        k2 = -a;
                    } else {
                        k1 = d;
                        k2 = -c;
                    }
                    double sc = std::max(std::abs(k1) / hu, std::abs(k2) / hv) + 1e-300;
                    ta = k1 / sc;
                    tb = k2 / sc;
                }
                if (val <= 1e-10) {
                    if (u < uu(i) - hu || u > uu(i) + 2 * hu || v < vv(j) - hv || v > vv(j) + 2 * hv)
                        continue;  // wandered off; owned by another cell
                    per_patch[size_t(pi)].push_back(int(found.size()));
                    found.push_back({p.ambient(u, v), pi, i, j, u, v, ta, tb});
                } else if (val < 0.02 * start && start > 1e-9 &&
                           u > p.u_range[0] + 0.6 * hu && u < p.u_range[1] - 0.6 * hu &&
                           v > p.v_range[0] + 0.6 * hv && v < p.v_range[1] - 0.6 * hv) {
                    // interior stall well below the coarse value: the zero set
                    // is not a clean transverse curve here
                    throw TangencyUnresolved(p.name + ": refinement stalled above tolerance");
                }
            }
    }

    if (found.empty()) return {};
    detail::UnionFind uf(found.size());
    // cell-adjacency within a patch
    for (auto& idxs : per_patch)
        for (size_t a = 0; a < idxs.size(); ++a)
            for (size_t b = a + 1; b < idxs.size(); ++b) {
                const Pt &A = found[size_t(idxs[a])], &B = found[size_t(idxs[b])];
                if (std::abs(A.ci - B.ci) <= 1 && std::abs(A.cj - B.cj) <= 1)
                    uf.unite(idxs[a], idxs[b]);
            }
    // cross-patch: ambient proximity at the scale of one grid cell measured
    // ALONG the curve (anisotropic patches make the transverse extent useless).
    // The junction gap is bounded by the coarser side's along-curve step.
    std::vector<double> cell_extent(found.size(), 0.0);
    for (size_t a = 0; a < found.size(); ++a) {
        const Patch& p = atlas.patches[size_t(found[a].patch)];
        double hu = (p.u_range[1] - p.u_range[0]) / n, hv = (p.v_range[1] - p.v_range[0]) / n;
        double u = found[a].u, v = found[a].v;
        double du = found[a].k1, dv = found[a].k2;
        double up = std::clamp(u + du, p.u_range[0], p.u_range[1]);
        double vp = std::clamp(v + dv, p.v_range[0], p.v_range[1]);
        double um = std::clamp(u - du, p.u_range[0], p.u_range[1]);
        double vm = std::clamp(v - dv, p.v_range[0], p.v_range[1]);
        cell_extent[a] = std::max(proj_distance(p.ambient(up, vp), found[a].h),
                                  proj_distance(p.ambient(um, vm), found[a].h));
    }
    for (size_t a = 0; a < found.size(); ++a)
        for (size_t b = a + 1; b < found.size(); ++b) {
            if (found[a].patch == found[b].patch) continue;
            double d = proj_distance(found[a].h, found[b].h);
            double scale = std::max(cell_extent[a], cell_extent[b]);
            if (d < 1e-9 || d <= 1.8 * scale) uf.unite(int(a), int(b));
        }

    std::map<int, std::vector<int>> comps;
    for (size_t i = 0; i < found.size(); ++i) comps[uf.find(int(i))].push_back(int(i));

    // Merge components that coincide geometrically (patch-edge curves traced
    // twice from both sides).
    std::vector<std::vector<int>> clist;
    for (auto& kv : comps) clist.push_back(kv.second);
    std::vector<bool> dead(clist.size(), false);
    auto hausdorff_small = [&](const std::vector<int>& A, const std::vector<int>& B) {
        for (int ia : A) {
            double best = 1e300;
            for (int ib : B) best = std::min(best, proj_distance(found[size_t(ia)].h, found[size_t(ib)].h));
            if (best > 1e-7) return false;
        }
        return true;
    };
    for (size_t a = 0; a < clist.size(); ++a)
        for (size_t b = 0; b < clist.size(); ++b) {
            if (a == b || dead[a] || dead[b]) continue;
            if (clist[a].size() <= clist[b].size() && hausdorff_small(clist[a], clist[b]))
                dead[a] = true;
        }

    std::vector<TracedCurve> out;
    for (size_t c = 0; c < clist.size(); ++c) {
        if (dead[c]) continue;
        // greedy nearest-neighbor ordering for presentation
        std::vector<int> left = clist[c];
        std::vector<int> tour{left.back()};
        left.pop_back();
        while (!left.empty()) {
            const HomogeneousPoint& cur = found[size_t(tour.back())].h;
            size_t bi = 0;
            double bd = 1e300;
            for (size_t i = 0; i < left.size(); ++i) {
                double d = proj_distance(cur, found[size_t(left[i])].h);
                if (d < bd) {
                    bd = d;
                    bi = i;
                }
            }
            tour.push_back(left[bi]);
            left.erase(left.begin() + long(bi));
        }
        TracedCurve tc;
        for (int i : tour) tc.points.push_back(found[size_t(i)].h);
        if (tc.points.size() >= 3) {
            double gap = proj_distance(tc.points.front(), tc.points.back());
            double max_step = 0.0;
            for (size_t i = 0; i + 1 < tc.points.size(); ++i)
                max_step = std::max(max_step, proj_distance(tc.points[i], tc.points[i + 1]));
            tc.closed = gap <= 3.0 * max_step;
        }
        out.push_back(std::move(tc));
    }
    return out;
}

/// Nearest approach between samples of two distinct patches (embeddedness report).
inline double patch_separation(const LagrangianAtlas& atlas, int pa, int pb, int n = 24) {
    const Patch &A = atlas.patches[size_t(pa)], &B = atlas.patches[size_t(pb)];
    double best = 1e300;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            HomogeneousPoint ha = A.ambient(A.u_range[0] + (A.u_range[1] - A.u_range[0]) * i / n,
                                            A.v_range[0] + (A.v_range[1] - A.v_range[0]) * j / n);
            for (int k = 0; k <= n; ++k)
                for (int l = 0; l <= n; ++l) {
                    HomogeneousPoint hb =
                        B.ambient(B.u_range[0] + (B.u_range[1] - B.u_range[0]) * k / n,
                                  B.v_range[0] + (B.v_range[1] - B.v_range[0]) * l / n);
                    best = std::min(best, proj_distance(ha, hb));
                }
        }
    return best;
}

}  // namespace lagsurg
