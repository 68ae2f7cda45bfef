#include "rf2d/base_surface.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>

namespace rf2d {

namespace {

using Vec3 = std::array<double, 3>;

Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
double dot3(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm3(const Vec3& a) { return std::sqrt(dot3(a, a)); }
Vec3 normalized(const Vec3& a) {
    const double n = norm3(a);
    return {a[0] / n, a[1] / n, a[2] / n};
}

// Solid angle of the spherical triangle spanned by unit vectors a, b, c.
double spherical_triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    const double num = std::abs(dot3(a, cross(b, c)));
    const double den = 1.0 + dot3(a, b) + dot3(b, c) + dot3(c, a);
    return 2.0 * std::atan2(num, den);
}

double great_circle_distance(const Vec3& a, const Vec3& b) {
    return std::atan2(norm3(cross(a, b)), dot3(a, b));
}

void build_adjacency(std::size_t n, std::vector<std::tuple<unsigned, unsigned, double>>& arcs,
                     std::vector<std::size_t>& ptr, std::vector<unsigned>& node,
                     std::vector<double>& len) {
    std::sort(arcs.begin(), arcs.end());
    ptr.assign(n + 1, 0);
    node.resize(arcs.size());
    len.resize(arcs.size());
    for (std::size_t k = 0; k < arcs.size(); ++k) {
        ptr[std::get<0>(arcs[k]) + 1]++;
        node[k] = std::get<1>(arcs[k]);
        len[k] = std::get<2>(arcs[k]);
    }
    for (std::size_t i = 0; i < n; ++i) ptr[i + 1] += ptr[i];
}

}  // namespace

std::shared_ptr<const BaseSurface> BaseSurface::torus(unsigned n) {
    if (n < 8) throw std::invalid_argument("torus resolution must be >= 8");
    auto s = std::make_shared<BaseSurface>();
    s->kind = SurfaceKind::Torus;
    s->resolution = n;
    s->node_count = static_cast<std::size_t>(n) * n;
    s->euler_characteristic = 0;
    s->base_scalar_curvature = 0.0;
    const double h = 2.0 * std::numbers::pi / n;
    s->mesh_spacing = h;
    s->weights.assign(s->node_count, h * h);
    s->base_area = 4.0 * std::numbers::pi * std::numbers::pi;

    s->xs.resize(s->node_count);
    s->ys.resize(s->node_count);
    for (unsigned j = 0; j < n; ++j) {
        for (unsigned i = 0; i < n; ++i) {
            const std::size_t id = static_cast<std::size_t>(j) * n + i;
            s->xs[id] = i * h;
            s->ys[id] = j * h;
        }
    }

    auto node_at = [n](unsigned i, unsigned j) { return static_cast<unsigned>(j % n) * n + (i % n); };

    // 5-point stiffness, unit edge weights: uᵀSu = Σ_edges (u_i - u_j)².
    std::vector<std::tuple<unsigned, unsigned, double>> trips;
    trips.reserve(s->node_count * 5);
    s->edges.reserve(s->node_count * 2);
    for (unsigned j = 0; j < n; ++j) {
        for (unsigned i = 0; i < n; ++i) {
            const unsigned a = node_at(i, j);
            for (const unsigned b : {node_at(i + 1, j), node_at(i, j + 1)}) {
                trips.emplace_back(a, a, 1.0);
                trips.emplace_back(b, b, 1.0);
                trips.emplace_back(a, b, -1.0);
                trips.emplace_back(b, a, -1.0);
                s->edges.push_back({std::min(a, b), std::max(a, b)});
            }
        }
    }
    s->stiffness = CsrMatrix::from_triplets(s->node_count, std::move(trips));

    // Chamfer mask out to (3,2): ~1.3% worst-case path overestimate.
    std::vector<std::array<int, 2>> moves;
    for (const auto& m : std::initializer_list<std::array<int, 2>>{
             {1, 0}, {1, 1}, {2, 1}, {3, 1}, {3, 2}}) {
        const int dx = m[0], dy = m[1];
        std::vector<std::array<int, 2>> sym = {{dx, dy}, {-dx, dy}, {dx, -dy}, {-dx, -dy},
                                               {dy, dx}, {-dy, dx}, {dy, -dx}, {-dy, -dx}};
        for (auto v : sym)
            if (std::find(moves.begin(), moves.end(), v) == moves.end()) moves.push_back(v);
    }
    std::vector<std::tuple<unsigned, unsigned, double>> arcs;
    arcs.reserve(s->node_count * moves.size());
    for (unsigned j = 0; j < n; ++j) {
        for (unsigned i = 0; i < n; ++i) {
            const unsigned a = node_at(i, j);
            for (const auto& m : moves) {
                const unsigned b = node_at(i + m[0] + 3 * n, j + m[1] + 3 * n);
                arcs.emplace_back(a, b, h * std::hypot(m[0], m[1]));
            }
        }
    }
    build_adjacency(s->node_count, arcs, s->adj_ptr, s->adj_node, s->adj_len);
    return s;
}

std::shared_ptr<const BaseSurface> BaseSurface::sphere(unsigned level) {
    if (level < 2 || level > 8) throw std::invalid_argument("sphere subdivision level must be in [2,8]");
    auto s = std::make_shared<BaseSurface>();
    s->kind = SurfaceKind::Sphere;
    s->resolution = level;
    s->euler_characteristic = 2;
    s->base_scalar_curvature = 2.0;

    // Icosahedron.
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> verts = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0},
                               {0, -1, t}, {0, 1, t}, {0, -1, -t}, {0, 1, -t},
                               {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto& v : verts) v = normalized(v);
    std::vector<std::array<unsigned, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
        {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
        {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};

    for (unsigned l = 0; l < level; ++l) {
        std::map<std::pair<unsigned, unsigned>, unsigned> midpoint;
        auto mid = [&](unsigned a, unsigned b) -> unsigned {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const Vec3 m = normalized({(verts[a][0] + verts[b][0]) / 2,
                                       (verts[a][1] + verts[b][1]) / 2,
                                       (verts[a][2] + verts[b][2]) / 2});
            const unsigned id = static_cast<unsigned>(verts.size());
            verts.push_back(m);
            midpoint.emplace(key, id);
            return id;
        };
        std::vector<std::array<unsigned, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const unsigned ab = mid(f[0], f[1]), bc = mid(f[1], f[2]), ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }

    s->node_count = verts.size();
    s->pos = std::move(verts);
    s->faces = std::move(faces);

    // Quadrature weights: spherical triangle areas, barycentric lumping.
    s->weights.assign(s->node_count, 0.0);
    s->face_flat_area.resize(s->faces.size());
    double area = 0.0;
    for (std::size_t f = 0; f < s->faces.size(); ++f) {
        const auto& tri = s->faces[f];
        const Vec3 &a = s->pos[tri[0]], &b = s->pos[tri[1]], &c = s->pos[tri[2]];
        const double omega = spherical_triangle_area(a, b, c);
        area += omega;
        for (int k = 0; k < 3; ++k) s->weights[tri[k]] += omega / 3.0;
        s->face_flat_area[f] = 0.5 * norm3(cross(sub(b, a), sub(c, a)));
    }
    s->base_area = area;

    // Cotangent stiffness from the flat triangles.
    std::vector<std::tuple<unsigned, unsigned, double>> trips;
    trips.reserve(s->faces.size() * 12);
    std::map<std::pair<unsigned, unsigned>, char> edge_seen;
    double min_edge = std::numeric_limits<double>::infinity();
    for (const auto& tri : s->faces) {
        for (int k = 0; k < 3; ++k) {
            const unsigned i = tri[k], j = tri[(k + 1) % 3], o = tri[(k + 2) % 3];
            const Vec3 u = sub(s->pos[i], s->pos[o]), v = sub(s->pos[j], s->pos[o]);
            const double cot = dot3(u, v) / norm3(cross(u, v));
            const double w = 0.5 * cot;  // halves from both sides add to (cotα+cotβ)/2
            trips.emplace_back(i, i, w);
            trips.emplace_back(j, j, w);
            trips.emplace_back(i, j, -w);
            trips.emplace_back(j, i, -w);
            const auto key = std::minmax(i, j);
            if (edge_seen.emplace(key, 1).second) {
                s->edges.push_back({key.first, key.second});
                min_edge = std::min(min_edge, norm3(sub(s->pos[i], s->pos[j])));
            }
        }
    }
    s->stiffness = CsrMatrix::from_triplets(s->node_count, std::move(trips));
    s->mesh_spacing = min_edge;

    // Distance graph: all nodes within three mesh hops, great-circle lengths.
    std::vector<std::vector<unsigned>> ring1(s->node_count);
    for (const auto& e : s->edges) {
        ring1[e[0]].push_back(e[1]);
        ring1[e[1]].push_back(e[0]);
    }
    std::vector<std::tuple<unsigned, unsigned, double>> arcs;
    std::vector<int> mark(s->node_count, -1);
    std::vector<unsigned> frontier, next;
    for (unsigned v = 0; v < s->node_count; ++v) {
        std::vector<unsigned> reached;
        mark[v] = static_cast<int>(v);
        frontier = {v};
        for (int hop = 0; hop < 3; ++hop) {
            next.clear();
            for (unsigned a : frontier) {
                for (unsigned b : ring1[a]) {
                    if (mark[b] != static_cast<int>(v)) {
                        mark[b] = static_cast<int>(v);
                        next.push_back(b);
                        reached.push_back(b);
                    }
                }
            }
            frontier = next;
        }
        for (unsigned b : reached) arcs.emplace_back(v, b, great_circle_distance(s->pos[v], s->pos[b]));
    }
    build_adjacency(s->node_count, arcs, s->adj_ptr, s->adj_node, s->adj_len);
    return s;
}

std::shared_ptr<const BaseSurface> BaseSurface::make(SurfaceKind kind, unsigned resolution) {
    return kind == SurfaceKind::Torus ? torus(resolution) : sphere(resolution);
}

}  // namespace rf2d
