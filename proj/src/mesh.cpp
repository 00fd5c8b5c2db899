#include "cellforce/mesh.hpp"

#include "cellforce/error.hpp"
#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <unordered_map>
#include <utility>

namespace cellforce {

namespace {

std::uint64_t edge_key(NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint64_t>(b);
}

// Number of grid steps of size h in `length`, or -1 if not an integer multiple.
long aligned_steps(double length, double h) {
    const double steps = length / h;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9 * std::max(1.0, std::abs(steps))) return -1;
    return static_cast<long>(rounded);
}

const char* region_name(Region r) { return r == Region::CellInterior ? "cell" : "exterior"; }
const char* tag_name(EdgeTag t) { return t == EdgeTag::OuterBoundary ? "outer" : "cell"; }

}  // namespace

Mesh::Mesh(std::vector<Vec2> nodes, std::vector<TriangleNodes> triangles,
           std::vector<Region> regions, std::vector<TaggedEdge> tagged_edges,
           DomainSize domain, CellSquare cell, double h_target, bool has_hole)
    : nodes_(std::move(nodes)),
      triangles_(std::move(triangles)),
      regions_(std::move(regions)),
      tagged_edges_(std::move(tagged_edges)),
      domain_(domain),
      cell_(cell),
      h_target_(h_target),
      has_hole_(has_hole) {
    if (regions_.size() != triangles_.size())
        fail(ErrorKind::Geometry, "mesh: one region tag per triangle required");
    std::unordered_map<std::uint64_t, int> edges;
    edges.reserve(3 * triangles_.size());
    for (const auto& t : triangles_) {
        for (int k = 0; k < 3; ++k) {
            if (t[k] >= nodes_.size()) fail(ErrorKind::Geometry, "mesh: triangle references missing node");
            ++edges[edge_key(t[k], t[(k + 1) % 3])];
        }
    }
    num_edges_ = edges.size();
    build_locator();
}

Triangle2 Mesh::vertices(std::size_t t) const {
    const auto& tri = triangles_[t];
    return {nodes_[tri[0]], nodes_[tri[1]], nodes_[tri[2]]};
}

double Mesh::area(std::size_t t) const {
    const auto v = vertices(t);
    return signed_area(v[0], v[1], v[2]);
}

void Mesh::build_locator() {
    const double h = h_target_ > 0.0 ? h_target_ : 1.0;
    bucket_nx_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(domain_.width / h)));
    bucket_ny_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(domain_.height / h)));
    bucket_dx_ = domain_.width / static_cast<double>(bucket_nx_);
    bucket_dy_ = domain_.height / static_cast<double>(bucket_ny_);
    buckets_.assign(bucket_nx_ * bucket_ny_, {});

    const double pad = 1e-9 * std::max(domain_.width, domain_.height);
    auto clamp_index = [](double v, std::size_t n) {
        if (v < 0.0) return std::size_t{0};
        return std::min(static_cast<std::size_t>(v), n - 1);
    };
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto v = vertices(t);
        const double xmin = std::min({v[0].x, v[1].x, v[2].x}) - pad;
        const double xmax = std::max({v[0].x, v[1].x, v[2].x}) + pad;
        const double ymin = std::min({v[0].y, v[1].y, v[2].y}) - pad;
        const double ymax = std::max({v[0].y, v[1].y, v[2].y}) + pad;
        const std::size_t i0 = clamp_index(xmin / bucket_dx_, bucket_nx_);
        const std::size_t i1 = clamp_index(xmax / bucket_dx_, bucket_nx_);
        const std::size_t j0 = clamp_index(ymin / bucket_dy_, bucket_ny_);
        const std::size_t j1 = clamp_index(ymax / bucket_dy_, bucket_ny_);
        for (std::size_t j = j0; j <= j1; ++j)
            for (std::size_t i = i0; i <= i1; ++i) buckets_[j * bucket_nx_ + i].push_back(t);
    }
}

std::vector<std::size_t> Mesh::bucket_candidates(Vec2 p) const {
    const double pad = 1e-9 * std::max(domain_.width, domain_.height);
    if (p.x < -pad || p.y < -pad || p.x > domain_.width + pad || p.y > domain_.height + pad) return {};
    auto index = [](double v, std::size_t n) {
        if (v <= 0.0) return std::size_t{0};
        return std::min(static_cast<std::size_t>(v), n - 1);
    };
    const std::size_t i = index(p.x / bucket_dx_, bucket_nx_);
    const std::size_t j = index(p.y / bucket_dy_, bucket_ny_);
    return buckets_[j * bucket_nx_ + i];
}

PointLocation Mesh::locate(Vec2 p) const {
    constexpr double tol = 1e-12;
    for (const std::size_t t : bucket_candidates(p)) {
        const auto v = vertices(t);
        const double a = signed_area(v[0], v[1], v[2]);
        std::array<double, 3> lam{signed_area(p, v[1], v[2]) / a, signed_area(v[0], p, v[2]) / a,
                                  signed_area(v[0], v[1], p) / a};
        if (lam[0] < -tol || lam[1] < -tol || lam[2] < -tol) continue;
        double sum = 0.0;
        for (double& l : lam) {
            l = std::clamp(l, 0.0, 1.0);
            sum += l;
        }
        for (double& l : lam) l /= sum;
        return {t, lam};
    }
    fail(ErrorKind::Location, "point (" + fmt17(p.x) + ", " + fmt17(p.y) + ") lies in no triangle");
}

std::vector<NodeId> Mesh::rectangle_loop(Vec2 lo, Vec2 hi) const {
    const double w = hi.x - lo.x;
    const double ht = hi.y - lo.y;
    if (!(w > 0.0) || !(ht > 0.0)) fail(ErrorKind::Geometry, "rectangle_loop: empty rectangle");
    const double tol = 1e-9 * std::max(w, ht);
    std::vector<std::pair<double, NodeId>> on_loop;
    for (NodeId n = 0; n < nodes_.size(); ++n) {
        const Vec2 p = nodes_[n];
        const bool in_x = p.x > lo.x - tol && p.x < hi.x + tol;
        const bool in_y = p.y > lo.y - tol && p.y < hi.y + tol;
        if (!in_x || !in_y) continue;
        double s;
        if (std::abs(p.y - lo.y) <= tol && p.x < hi.x - tol) s = p.x - lo.x;
        else if (std::abs(p.x - hi.x) <= tol && p.y < hi.y - tol) s = w + (p.y - lo.y);
        else if (std::abs(p.y - hi.y) <= tol && p.x > lo.x + tol) s = w + ht + (hi.x - p.x);
        else if (std::abs(p.x - lo.x) <= tol && p.y > lo.y + tol) s = 2.0 * w + ht + (hi.y - p.y);
        else continue;
        on_loop.emplace_back(s, n);
    }
    std::sort(on_loop.begin(), on_loop.end());
    // the four corners must be mesh nodes for the loop to trace the rectangle
    int corners = 0;
    for (const auto& [s, n] : on_loop) {
        for (const double c : {0.0, w, w + ht, 2.0 * w + ht})
            if (std::abs(s - c) <= tol) ++corners;
    }
    if (corners != 4) fail(ErrorKind::Geometry, "rectangle_loop: rectangle corners are not mesh nodes");
    std::vector<NodeId> loop;
    loop.reserve(on_loop.size());
    for (const auto& entry : on_loop) loop.push_back(entry.second);
    return loop;
}

std::vector<NodeId> Mesh::outer_boundary_nodes() const {
    std::vector<char> mark(nodes_.size(), 0);
    for (const auto& e : tagged_edges_)
        if (e.tag == EdgeTag::OuterBoundary) mark[e.nodes[0]] = mark[e.nodes[1]] = 1;
    std::vector<NodeId> out;
    for (NodeId n = 0; n < nodes_.size(); ++n)
        if (mark[n]) out.push_back(n);
    return out;
}

std::vector<std::string> Mesh::check_invariants() const {
    std::vector<std::string> problems;
    double total = 0.0;
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const double a = area(t);
        if (!(a > 0.0)) problems.push_back("triangle " + std::to_string(t) + " has non-positive area");
        total += a;
    }
    const double expected = domain_.width * domain_.height - (has_hole_ ? cell_.side * cell_.side : 0.0);
    if (std::abs(total - expected) > 1e-12 * expected)
        problems.push_back("area sum " + fmt17(total) + " differs from domain area " + fmt17(expected));

    std::unordered_map<std::uint64_t, std::vector<std::size_t>> owners;
    for (std::size_t t = 0; t < triangles_.size(); ++t)
        for (int k = 0; k < 3; ++k) owners[edge_key(triangles_[t][k], triangles_[t][(k + 1) % 3])].push_back(t);

    std::unordered_map<std::uint64_t, EdgeTag> tags;
    for (const auto& e : tagged_edges_) tags.emplace(edge_key(e.nodes[0], e.nodes[1]), e.tag);

    for (const auto& [key, tris] : owners) {
        const auto tag = tags.find(key);
        const bool outer = tag != tags.end() && tag->second == EdgeTag::OuterBoundary;
        const bool cavity = has_hole_ && tag != tags.end() && tag->second == EdgeTag::CellBoundary;
        const std::size_t want = (outer || cavity) ? 1 : 2;
        if (tris.size() != want)
            problems.push_back("edge shared by " + std::to_string(tris.size()) + " triangles, expected " +
                               std::to_string(want));
    }
    for (const auto& e : tagged_edges_) {
        const auto it = owners.find(edge_key(e.nodes[0], e.nodes[1]));
        if (it == owners.end()) {
            problems.push_back("tagged edge is not an edge of any triangle");
            continue;
        }
        if (e.tag != EdgeTag::CellBoundary) continue;
        int inside = 0;
        int outside = 0;
        for (const std::size_t t : it->second) (regions_[t] == Region::CellInterior ? inside : outside)++;
        const bool ok = has_hole_ ? (inside == 0 && outside == 1) : (inside == 1 && outside == 1);
        if (!ok) problems.push_back("cell boundary edge does not separate cell interior from exterior");
    }
    return problems;
}

double Mesh::min_angle() const {
    double best = std::numbers::pi;
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto v = vertices(t);
        for (int k = 0; k < 3; ++k) {
            const Vec2 a = v[(k + 1) % 3] - v[k];
            const Vec2 b = v[(k + 2) % 3] - v[k];
            best = std::min(best, std::acos(std::clamp(dot(a, b) / (norm(a) * norm(b)), -1.0, 1.0)));
        }
    }
    return best;
}

void Mesh::write_text(std::ostream& os) const {
    os << "# nodes " << nodes_.size() << "\n# index x y\n";
    for (NodeId n = 0; n < nodes_.size(); ++n)
        os << n << ' ' << fmt17(nodes_[n].x) << ' ' << fmt17(nodes_[n].y) << '\n';
    os << "# triangles " << triangles_.size() << "\n# index n0 n1 n2 region\n";
    for (std::size_t t = 0; t < triangles_.size(); ++t) {
        const auto& tri = triangles_[t];
        os << t << ' ' << tri[0] << ' ' << tri[1] << ' ' << tri[2] << ' ' << region_name(regions_[t]) << '\n';
    }
    os << "# edges " << tagged_edges_.size() << "\n# index n0 n1 tag\n";
    for (std::size_t e = 0; e < tagged_edges_.size(); ++e) {
        const auto& edge = tagged_edges_[e];
        os << e << ' ' << edge.nodes[0] << ' ' << edge.nodes[1] << ' ' << tag_name(edge.tag) << '\n';
    }
}

Mesh generate_mesh(DomainSize domain, double h_target, const CellSquare& cell, bool exclude_cell_interior) {
    if (!(domain.width > 0.0) || !(domain.height > 0.0))
        fail(ErrorKind::Geometry, "domain extents must be positive");
    if (!(cell.side > 0.0)) fail(ErrorKind::Geometry, "cell side must be positive");
    const Vec2 lo = cell.lower();
    const Vec2 hi = cell.upper();
    if (!(lo.x > 0.0 && lo.y > 0.0 && hi.x < domain.width && hi.y < domain.height))
        fail(ErrorKind::Geometry, "cell square does not lie strictly inside the domain");
    if (!(h_target > 0.0)) fail(ErrorKind::Config, "h_target must be positive");

    const long nx = aligned_steps(domain.width, h_target);
    const long ny = aligned_steps(domain.height, h_target);
    const long ci0 = aligned_steps(lo.x, h_target);
    const long ci1 = aligned_steps(hi.x, h_target);
    const long cj0 = aligned_steps(lo.y, h_target);
    const long cj1 = aligned_steps(hi.y, h_target);
    if (nx < 1 || ny < 1 || ci0 < 0 || ci1 < 0 || cj0 < 0 || cj1 < 0)
        fail(ErrorKind::Config, "h_target " + fmt17(h_target) +
                                    " does not align the grid with the domain and cell edges");

    const auto grid_id = [nx](long i, long j) { return static_cast<NodeId>(j * (nx + 1) + i); };
    std::vector<Vec2> nodes;
    nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    for (long j = 0; j <= ny; ++j)
        for (long i = 0; i <= nx; ++i)
            nodes.push_back({static_cast<double>(i) * h_target, static_cast<double>(j) * h_target});

    const auto in_cell = [&](long i, long j) { return i >= ci0 && i < ci1 && j >= cj0 && j < cj1; };

    std::vector<TriangleNodes> triangles;
    std::vector<Region> regions;
    for (long j = 0; j < ny; ++j) {
        for (long i = 0; i < nx; ++i) {
            const bool inside = in_cell(i, j);
            if (inside && exclude_cell_interior) continue;
            const NodeId a = grid_id(i, j), b = grid_id(i + 1, j), c = grid_id(i + 1, j + 1), d = grid_id(i, j + 1);
            const Region r = inside ? Region::CellInterior : Region::Exterior;
            triangles.push_back({a, b, c});
            triangles.push_back({a, c, d});
            regions.push_back(r);
            regions.push_back(r);
        }
    }

    std::vector<TaggedEdge> edges;
    for (long i = 0; i < nx; ++i) edges.push_back({{grid_id(i, 0), grid_id(i + 1, 0)}, EdgeTag::OuterBoundary});
    for (long j = 0; j < ny; ++j) edges.push_back({{grid_id(nx, j), grid_id(nx, j + 1)}, EdgeTag::OuterBoundary});
    for (long i = nx; i > 0; --i) edges.push_back({{grid_id(i, ny), grid_id(i - 1, ny)}, EdgeTag::OuterBoundary});
    for (long j = ny; j > 0; --j) edges.push_back({{grid_id(0, j), grid_id(0, j - 1)}, EdgeTag::OuterBoundary});
    for (long i = ci0; i < ci1; ++i) edges.push_back({{grid_id(i, cj0), grid_id(i + 1, cj0)}, EdgeTag::CellBoundary});
    for (long j = cj0; j < cj1; ++j) edges.push_back({{grid_id(ci1, j), grid_id(ci1, j + 1)}, EdgeTag::CellBoundary});
    for (long i = ci1; i > ci0; --i) edges.push_back({{grid_id(i, cj1), grid_id(i - 1, cj1)}, EdgeTag::CellBoundary});
    for (long j = cj1; j > cj0; --j) edges.push_back({{grid_id(ci0, j), grid_id(ci0, j - 1)}, EdgeTag::CellBoundary});

    if (exclude_cell_interior) {
        // drop the nodes strictly inside the cavity and renumber
        std::vector<NodeId> remap(nodes.size(), std::numeric_limits<NodeId>::max());
        std::vector<Vec2> kept;
        for (long j = 0; j <= ny; ++j) {
            for (long i = 0; i <= nx; ++i) {
                const bool interior = i > ci0 && i < ci1 && j > cj0 && j < cj1;
                if (interior) continue;
                remap[grid_id(i, j)] = kept.size();
                kept.push_back(nodes[grid_id(i, j)]);
            }
        }
        for (auto& t : triangles)
            for (auto& n : t) n = remap[n];
        for (auto& e : edges)
            for (auto& n : e.nodes) n = remap[n];
        nodes = std::move(kept);
    }

    return Mesh(std::move(nodes), std::move(triangles), std::move(regions), std::move(edges), domain, cell,
                h_target, exclude_cell_interior);
}

Mesh refine(const Mesh& mesh) {
    std::vector<Vec2> nodes = mesh.nodes();
    std::unordered_map<std::uint64_t, NodeId> midpoint;
    midpoint.reserve(mesh.num_edges());
    const auto mid = [&](NodeId a, NodeId b) {
        const auto [it, inserted] = midpoint.try_emplace(edge_key(a, b), nodes.size());
        if (inserted) nodes.push_back(0.5 * (mesh.nodes()[a] + mesh.nodes()[b]));
        return it->second;
    };

    std::vector<TriangleNodes> triangles;
    std::vector<Region> regions;
    triangles.reserve(4 * mesh.num_triangles());
    regions.reserve(4 * mesh.num_triangles());
    for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
        const auto [a, b, c] = mesh.triangles()[t];
        const NodeId ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
        for (const TriangleNodes& child : {TriangleNodes{a, ab, ca}, TriangleNodes{ab, b, bc},
                                           TriangleNodes{ca, bc, c}, TriangleNodes{ab, bc, ca}}) {
            triangles.push_back(child);
            regions.push_back(mesh.regions()[t]);
        }
    }

    std::vector<TaggedEdge> edges;
    edges.reserve(2 * mesh.tagged_edges().size());
    for (const auto& e : mesh.tagged_edges()) {
        const NodeId m = mid(e.nodes[0], e.nodes[1]);
        edges.push_back({{e.nodes[0], m}, e.tag});
        edges.push_back({{m, e.nodes[1]}, e.tag});
    }

    return Mesh(std::move(nodes), std::move(triangles), std::move(regions), std::move(edges), mesh.domain(),
                mesh.cell(), 0.5 * mesh.h_target(), mesh.has_hole());
}

std::vector<NodeId> match_nodes(const Mesh& sub, const Mesh& full) {
    std::map<std::pair<double, double>, NodeId> index;
    for (NodeId n = 0; n < full.num_nodes(); ++n) index.emplace(std::pair{full.nodes()[n].x, full.nodes()[n].y}, n);
    std::vector<NodeId> out(sub.num_nodes());
    for (NodeId n = 0; n < sub.num_nodes(); ++n) {
        const auto it = index.find({sub.nodes()[n].x, sub.nodes()[n].y});
        if (it == index.end()) fail(ErrorKind::Geometry, "match_nodes: node has no counterpart in the full mesh");
        out[n] = it->second;
    }
    return out;
}

}  // namespace cellforce
