#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "liftdual/grid.hpp"

namespace liftdual {

// The dual variable of the solver.  Every face of the cylinder carries a full
// (dim+1)-vector: its own difference plus the average of the four
// neighbouring faces of each other direction.  Spatial faces also exist on
// the ghost layers just below t=m and just above t=M, so the slab jumps are
// seen by them too.  Component index a < dim is a spatial axis, a == dim is t.
//
// Storage is padded so stencils need no bounds checks:
//   x family: i in [0,n0], j in [-1,n1], layer l = k+1 in [0, nt+1]
//   y family: i in [-1,n0], j in [0,n1], same layers
//   t family: column (i,j) in [-1,n0] x [-1,n1], level index kk+1, kk in [-1, nt+1]
struct FaceVectorField {
    std::array<std::vector<double>, 3> x;
    std::array<std::vector<double>, 3> y;
    std::array<std::vector<double>, 3> t;
};

class Lifting {
public:
    Lifting(const GridSpec& g, const DomainMask& mask);

    const GridSpec& grid() const { return g_; }
    const DomainMask& mask() const { return mask_; }
    int components() const { return g_.dim + 1; }
    double face_weight() const { return g_.cell_volume() / components(); }

    int xlayers() const { return g_.nt + 2; }
    int tlevels() const { return g_.nt + 3; }
    std::size_t xpos(int i, int j) const { return std::size_t(j + 1) * (g_.n[0] + 1) + i; }
    std::size_t ypos(int i, int j) const { return std::size_t(j) * (g_.n[0] + 2) + (i + 1); }
    std::size_t tpos(int i, int j) const { return std::size_t(j + 1) * (g_.n[0] + 2) + (i + 1); }

    FaceVectorField zeros() const;

    // q = E g for a physical gradient g (Neumann faces contribute nothing)
    void expand(const FluxField& g, FaceVectorField& q) const;
    // s -> E^T s, scaled so that <E g, s>_W = <g, contract(s)>_faces
    void contract(const FaceVectorField& s, FluxField& out) const;

    // faces that carry a dual vector
    const std::vector<std::uint8_t>& x_active() const { return xact_; }
    const std::vector<std::uint8_t>& y_active() const { return yact_; }
    const std::vector<std::uint8_t>& t_active() const { return tact_; }

    double inner(const FaceVectorField& a, const FaceVectorField& b) const;

private:
    GridSpec g_;
    DomainMask mask_;
    std::vector<std::uint8_t> xact_, yact_, tact_;
    mutable std::vector<double> gx_, gy_, gt_;
};

}  // namespace liftdual
