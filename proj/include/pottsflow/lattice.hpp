#pragma once

#include <cstddef>
#include <string>

#include "pottsflow/cycle_space.hpp"
#include "pottsflow/graph.hpp"

namespace pottsflow {

/// A lattice graph together with its face (or elementary square) generating set.
/// The generating set carries the lattice-family parameter bound.
struct Lattice {
    OrientedMultigraph graph;
    EvenGenSet gens;
};

/// w x h vertex grid. Vertex (x, y) has id y*w + x. Horizontal edges first
/// (row-major), then vertical edges (row-major); edges point to increasing
/// coordinate. One counter-clockwise 4-cycle per cell, cells in row-major order.
/// Family bound (d, iota, ell, s) = (4, 1, 4, 2).
Lattice grid_faces(std::size_t w, std::size_t h);

/// w x h x depth vertex grid with one 4-cycle per elementary square.
/// Family bound (12, 1, 4, 4).
Lattice cube_squares(std::size_t w, std::size_t h, std::size_t depth);

/// w x h grid plus the diagonal (x, y) -> (x+1, y+1) in every cell; two triangles
/// per cell. Family bound (3, 1, 3, 2).
Lattice tri_faces(std::size_t w, std::size_t h);

/// Honeycomb patch of w x h hexagons in brick-wall layout; one 6-cycle per hexagon.
/// Family bound (6, 1, 6, 2).
Lattice hex_faces(std::size_t w, std::size_t h);

/// Parses "grid:WxH", "grid3:WxHxD", "tri:WxH" or "hex:WxH". Throws InvalidArgument
/// for anything else.
Lattice lattice_from_spec(const std::string& spec);

/// Whether the string names a lattice generator rather than a file.
bool is_lattice_spec(const std::string& spec);

}  // namespace pottsflow
