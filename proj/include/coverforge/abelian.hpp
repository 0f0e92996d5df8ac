#pragma once

#include "coverforge/exec.hpp"
#include "coverforge/intmat.hpp"

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace coverforge {

// Element of a finitely generated abelian group, as a coordinate vector on
// the presentation generators of the group it belongs to.  Two vectors
// represent the same element iff their difference lies in the column span of
// the relation matrix; the owning group is always passed as context.
using GroupElt = std::vector<Int>;

// Finitely generated abelian group presented as coker(relations: Z^m -> Z^k).
// Handles are cheap shared references to an immutable implementation; two
// handles denote "the same group" only if they share that implementation.
class FgAbGroup {
  public:
    FgAbGroup(); // trivial group
    explicit FgAbGroup(std::size_t generators, IntMatrix relations);

    std::size_t generators() const;
    const IntMatrix& relations() const;

    const std::vector<Int>& invariant_factors() const; // entries >= 2, divisibility chain
    std::size_t free_rank() const;
    bool is_finite() const;
    bool is_trivial() const;
    Int order() const;    // throws input_error when infinite
    Int exponent() const; // finite groups: lcm of invariant factors (1 if trivial)

    bool same_group(const FgAbGroup& other) const { return impl_ == other.impl_; }

    // -- element arithmetic ------------------------------------------------
    std::vector<Int> zero() const;
    bool is_zero(std::span<const Int> coords) const;
    bool equal(std::span<const Int> a, std::span<const Int> b) const;
    std::vector<Int> add(std::span<const Int> a, std::span<const Int> b) const;
    std::vector<Int> negate(std::span<const Int> a) const;
    std::vector<Int> scale(const Int& n, std::span<const Int> a) const;

    // Canonical representative of an element's class (complete invariant).
    std::vector<Int> normal_form(std::span<const Int> coords) const;

    // Least m >= 1 with m·a = 0; nullopt for elements of infinite order.
    std::optional<Int> element_order(std::span<const Int> coords) const;

    // Coordinates on the invariant-factor decomposition (finite part),
    // entry j in [0, e_j); and the section back to generator coordinates.
    std::vector<Int> decomposition_coords(std::span<const Int> coords) const;
    std::vector<Int> from_decomposition_coords(std::span<const Int> dec) const;

    // All elements of a finite group, in decomposition (mixed-radix) order.
    std::vector<std::vector<Int>> elements() const;

  private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
    const Impl& impl() const { return *impl_; }
};

FgAbGroup from_invariant_factors(std::span<const Int> factors, std::size_t free_rank);
FgAbGroup free_group(std::size_t rank);
// Direct sum Z_{d1} + ... + Z_{dn} keeping one generator per summand,
// including trivial summands (d_i = 1), so indices stay aligned.
FgAbGroup direct_sum_cyclic(std::span<const Int> orders);

// Homomorphism between presented groups; matrix is target.k x source.k and
// must map every source relation into the span of the target relations.
struct GroupHom {
    GroupHom(FgAbGroup source, FgAbGroup target, IntMatrix matrix);

    FgAbGroup source;
    FgAbGroup target;
    IntMatrix matrix;

    std::vector<Int> apply(std::span<const Int> coords) const;
};

struct SubgroupPart {
    FgAbGroup group;
    GroupHom inclusion; // group -> ambient
};

struct QuotientPart {
    FgAbGroup group;
    GroupHom projection; // ambient -> group
};

// Subgroup generated by the columns of `gens` (coordinates in `ambient`).
SubgroupPart subgroup_from_generators(const FgAbGroup& ambient, const IntMatrix& gens);

QuotientPart cokernel(const GroupHom& h);
SubgroupPart kernel(const GroupHom& h);
SubgroupPart image(const GroupHom& h);
bool is_injective(const GroupHom& h);

// Hom(A, Z) together with the pairing matrix P (free_rank x k): the pairing
// of dual generator j with an element x is (P·x)_j.  P's rows are the
// canonical (row-HNF) basis of the relation matrix's left kernel, so the
// pairing vanishes on torsion and the dual basis is reproducible.
struct DualFree {
    FgAbGroup dual; // free of rank free_rank(A)
    IntMatrix pairing;
};

DualFree dual_free(const FgAbGroup& a);

SubgroupPart torsion_subgroup(const FgAbGroup& a);

// One record per subgroup of a finite group.  `lattice` is the canonical
// HNF basis of the subgroup's preimage in decomposition coordinates; records
// are sorted by it, so the output order is deterministic.
struct SubgroupRecord {
    FgAbGroup group;
    GroupHom inclusion;
    IntMatrix lattice;
};

std::vector<SubgroupRecord> subgroups(const FgAbGroup& a, const Int& bound,
                                      Exec exec = Exec::parallel);

// Character of a finite group, as exponents on the invariant-factor
// decomposition: coords[j] in [0, e_j).  Root-of-unity values are kept as
// exponents of a fixed abstract primitive d-th root, d = exponent of the group.
struct Character {
    FgAbGroup group;
    std::vector<Int> coords;
};

Character trivial_character(const FgAbGroup& a);
std::vector<Character> all_characters(const FgAbGroup& a);
Character add_characters(const Character& x, const Character& y);
Int character_order(const Character& x);

// <chi, a> as an exponent in Z_d, d = exponent of the group:
//   t = sum_j chi_j * a_j * (d / e_j)  (mod d).
Int pair_character(const Character& chi, const FgAbGroup& group,
                   std::span<const Int> elt_coords);

} // namespace coverforge
