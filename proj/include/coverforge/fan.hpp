#pragma once

#include "coverforge/abelian.hpp"
#include "coverforge/intmat.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace coverforge {

// Complete fan in a lattice N = Z^s: primitive ray generators r_i and cones
// as sets of ray indices.  Ray order is the global indexing of the invariant
// divisors D_i everywhere (branch orders, reports).
//
// Completeness is verified exactly for rank <= 2; for higher rank the input's
// flag is trusted but a deterministic sample of points must be covered by the
// cones, and a failure is fatal.
struct Fan {
    std::size_t rank = 0;
    std::vector<std::vector<Int>> rays;
    std::vector<std::vector<std::size_t>> cones;
    bool complete = false;
};

// Validating constructor; throws input_error naming the offending field.
Fan make_fan(std::size_t rank, std::vector<std::vector<Int>> rays,
             std::vector<std::vector<std::size_t>> cones, bool complete);

// v / gcd(entries of v); rejects the zero vector, keeps the direction.
std::vector<Int> primitive(std::span<const Int> v);

// Finite-index sublattice N' of Z^s, stored as a canonical column-HNF basis.
struct Sublattice {
    std::size_t ambient_rank = 0;
    IntMatrix basis; // s x s, column HNF
    Int index;       // |det(basis)|
};

// Canonicalizes the given generating columns; throws input_error if they do
// not span a finite-index sublattice.
Sublattice make_sublattice(std::size_t ambient_rank, const IntMatrix& generators);

bool sublattice_contains(const Sublattice& sub, std::span<const Int> v);

// N/N' together with the projection from Z^s.
QuotientPart quotient_group(const Sublattice& sub);

// d_i = least positive integer with d_i * r_i in N'.
std::vector<Int> ramification_orders(const Fan& fan, const Sublattice& sub);

// Sublattice generated by the d_i * r_i.
Sublattice sublattice_from_multiples(const Fan& fan, std::span<const Int> orders);

// The fan of the covering toric variety: same cones, rays re-expressed in
// N'-coordinates and re-primitivized.
Fan refine(const Fan& fan, const Sublattice& sub);

// Combinatorial model of a toric cover X -> Y.
struct CoverSpec {
    Fan fan;
    Sublattice sublattice;
    FgAbGroup galois_group; // N/N'
    std::vector<Int> ram_orders;
};

CoverSpec make_cover_spec(const Fan& fan, Sublattice sub);

// Lattice isomorphism of fans: a GL_s(Z) map carrying rays to rays
// bijectively and cones to cones.
bool fans_isomorphic(const Fan& a, const Fan& b);

} // namespace coverforge
