#pragma once

#include "cellforce/geometry.hpp"

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

namespace cellforce {

enum class Region : unsigned char { CellInterior, Exterior };
enum class EdgeTag : unsigned char { OuterBoundary, CellBoundary };

using NodeId = std::size_t;
using TriangleNodes = std::array<NodeId, 3>;

struct TaggedEdge {
    std::array<NodeId, 2> nodes;
    EdgeTag tag;
};

/// Extent of the rectangular computational domain [0, width] x [0, height].
struct DomainSize {
    double width = 20.0;
    double height = 20.0;
};

struct PointLocation {
    std::size_t triangle;
    std::array<double, 3> barycentric;
};

/// Conforming P1 triangulation of a rectangle containing an aligned square cell.
///
/// Triangles are counterclockwise. `tagged_edges()` lists every edge on the outer
/// boundary and every edge on the cell boundary; on a full mesh the latter are
/// interior edges, on a hole mesh they close the cavity. Immutable once built.
class Mesh {
public:
    Mesh(std::vector<Vec2> nodes, std::vector<TriangleNodes> triangles,
         std::vector<Region> regions, std::vector<TaggedEdge> tagged_edges,
         DomainSize domain, CellSquare cell, double h_target, bool has_hole);

    const std::vector<Vec2>& nodes() const { return nodes_; }
    const std::vector<TriangleNodes>& triangles() const { return triangles_; }
    const std::vector<Region>& regions() const { return regions_; }
    const std::vector<TaggedEdge>& tagged_edges() const { return tagged_edges_; }

    std::size_t num_nodes() const { return nodes_.size(); }
    std::size_t num_triangles() const { return triangles_.size(); }
    std::size_t num_dofs() const { return 2 * nodes_.size(); }
    /// Total number of distinct edges.
    std::size_t num_edges() const { return num_edges_; }

    const DomainSize& domain() const { return domain_; }
    const CellSquare& cell() const { return cell_; }
    double h_target() const { return h_target_; }
    bool has_hole() const { return has_hole_; }

    Triangle2 vertices(std::size_t t) const;
    double area(std::size_t t) const;

    /// Lowest-index triangle containing `p`, with barycentric coordinates in [0, 1].
    /// Throws ErrorKind::Location when no triangle contains `p`.
    PointLocation locate(Vec2 p) const;

    /// Nodes on the boundary of the axis-aligned rectangle [lo, hi], ordered
    /// counterclockwise starting from the lower-left corner. The rectangle must
    /// be aligned with mesh nodes.
    std::vector<NodeId> rectangle_loop(Vec2 lo, Vec2 hi) const;

    /// Nodes touched by at least one OuterBoundary edge.
    std::vector<NodeId> outer_boundary_nodes() const;

    /// Human-readable descriptions of every violated structural invariant.
    std::vector<std::string> check_invariants() const;

    double min_angle() const;

    /// Node table, triangle table and tagged-edge table as plain text.
    void write_text(std::ostream& os) const;

private:
    void build_locator();
    std::vector<std::size_t> bucket_candidates(Vec2 p) const;

    std::vector<Vec2> nodes_;
    std::vector<TriangleNodes> triangles_;
    std::vector<Region> regions_;
    std::vector<TaggedEdge> tagged_edges_;
    DomainSize domain_;
    CellSquare cell_;
    double h_target_;
    bool has_hole_;
    std::size_t num_edges_ = 0;

    // uniform bucket grid over the domain for point location
    std::size_t bucket_nx_ = 1;
    std::size_t bucket_ny_ = 1;
    double bucket_dx_ = 1.0;
    double bucket_dy_ = 1.0;
    std::vector<std::vector<std::size_t>> buckets_;
};

/// Structured triangulation with every grid square split along its
/// lower-left to upper-right diagonal. With `exclude_cell_interior` the cell
/// triangles are dropped, the unused nodes removed, and the cell boundary
/// becomes a cavity wall.
Mesh generate_mesh(DomainSize domain, double h_target, const CellSquare& cell,
                   bool exclude_cell_interior);

/// Uniform red refinement: every triangle split into four by edge midpoints.
Mesh refine(const Mesh& mesh);

/// For each node of `sub`, the node of `full` at the identical position.
/// Throws ErrorKind::Geometry if some node has no counterpart.
std::vector<NodeId> match_nodes(const Mesh& sub, const Mesh& full);

}  // namespace cellforce
