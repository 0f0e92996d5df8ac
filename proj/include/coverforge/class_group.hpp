#pragma once

#include "coverforge/abelian.hpp"
#include "coverforge/fan.hpp"

#include <optional>
#include <vector>

namespace coverforge {

// Divisor class group presented on the invariant divisors D_i: the group is
// coker(M -> Z^n), m |-> (<m, r_i>)_i, so divisor classes have canonical
// coordinates (the standard generators).  In abstract mode (no fan) the user
// supplies the group and the n divisor classes directly.
struct ClassGroupData {
    std::optional<Fan> fan;
    FgAbGroup cl;
    std::vector<GroupElt> divisor_classes;
    GroupHom projection; // Z^n -> cl
};

ClassGroupData class_group(const Fan& fan);

ClassGroupData abstract_class_group(std::vector<Int> invariant_factors,
                                    std::size_t free_rank,
                                    std::vector<GroupElt> divisor_classes);

// Tors(Cl) compared against N/<r_i>; the two invariant-factor lists must
// agree, a mismatch is an internal-consistency failure.
struct TorsionCheck {
    bool torsion_free;
    std::vector<Int> cl_torsion_factors;
    std::vector<Int> lattice_quotient_factors;
};

TorsionCheck torsion_check(const Fan& fan);

// The cover with sublattice <r_i> and Galois group isomorphic to Tors(Cl).
// Its refined fan has torsion-free class group (verified).
CoverSpec torsion_cover(const Fan& fan);

// Cl[d] = 0, i.e. no invariant factor shares a prime with d.
bool class_group_d_torsion_free(const FgAbGroup& cl, const Int& d);

} // namespace coverforge
