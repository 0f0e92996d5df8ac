#pragma once

#include "coverforge/class_group.hpp"
#include "coverforge/exec.hpp"

#include <optional>
#include <vector>

namespace coverforge {

// Branch orders d_i >= 1, aligned with the divisor/ray indexing.
struct BranchData {
    std::vector<Int> orders;
    Int lcm; // lcm(d_1, ..., d_n); 1 for the empty list
};

BranchData make_branch(std::vector<Int> orders);

// The map phi: Cl(Y)^dual -> +Z_{d_i}, column j = pairings of the j-th dual
// generator with the divisor classes, reduced mod d_i.  Also returns the
// target built with one generator per divisor.
struct PhiData {
    FgAbGroup sum; // +Z_{d_i}, generator i aligned with divisor i
    GroupHom hom;  // dual_free(cl) -> sum
    DualFree dual;
};

PhiData phi(const ClassGroupData& cl, const BranchData& branch);

// K_min = im(phi), G_max = coker(K_min -> +Z_{d_i}), per-divisor injectivity
// of Z_{d_i} -> G_max, and the d-torsion condition on Cl.
struct ExistenceReport {
    FgAbGroup sum;
    GroupHom projection; // sum -> g_max
    FgAbGroup k_min;
    FgAbGroup g_max;
    std::vector<bool> per_divisor_injective;
    bool torsion_condition_ok;
    bool exists; // all injective && torsion condition
};

ExistenceReport gmax(const ClassGroupData& cl, const BranchData& branch);

// booleans[i] = (d_i * r_i is primitive in the sublattice generated by all
// d_j * r_j).  On a fan with torsion-free Cl this must coincide with the
// injectivity vector of gmax; a disagreement is fatal.
std::vector<bool> existence_toric(const Fan& fan, const BranchData& branch);

// The cover for the sublattice generated by the d_i * r_i.  Throws
// nonexistence_error naming the offending divisors when no cover with the
// requested orders exists.  On torsion-free Cl the Galois group is checked
// against gmax().g_max.
CoverSpec max_toric_cover(const Fan& fan, const BranchData& branch);

// One cover per subgroup H of N/N'_min: the sublattice is the preimage of H
// in N.  Deterministic canonical order (sorted by sublattice HNF) regardless
// of the execution policy.
std::vector<CoverSpec> enumerate_covers(const Fan& fan, const BranchData& branch,
                                        const Int& bound, Exec exec = Exec::parallel);

// Smallest non-negative a with chi(g) = zeta^(a*d/o(g)); always in [0, o(g)).
Int chi_bar(const Character& chi, const FgAbGroup& group, const GroupElt& g);

// floor((chibar(g) + chibar'(g)) / o(g)), always 0 or 1.
int epsilon(const Character& chi, const Character& chi_prime, const FgAbGroup& group,
            const GroupElt& g);

// Concrete abelian cover: finite group G with branch elements g_i of order
// exactly d_i.  Totally ramified iff the g_i generate G.
struct AbelianCoverData {
    FgAbGroup group;
    std::vector<GroupElt> branch_elements;
    BranchData branch;
    bool totally_ramified;
};

AbelianCoverData make_abelian_cover(FgAbGroup group,
                                    std::vector<GroupElt> branch_elements,
                                    BranchData branch);

// Basis characters chi_j (SNF decomposition of G), their orders m_j, and the
// classes L_j solving  m_j L_j = sum_i (m_j chibar_j(g_i)/d_i) [D_i]  in Cl.
// The list of L_j depends on the chosen character basis; relation checking
// does not.
struct BuildingData {
    AbelianCoverData cover;
    ClassGroupData cl;
    std::vector<Character> basis_chars;
    std::vector<Int> char_orders;
    std::vector<GroupElt> l_classes;
};

BuildingData solve_building_data(const ClassGroupData& cl,
                                 const AbelianCoverData& cover);

struct RelationViolation {
    std::size_t chi_index;
    std::size_t chi_prime_index;
};

// Derives L_chi for every character from the basis classes and checks
//   L_chi + L_chi' = L_{chi+chi'} + sum_i eps^i_{chi,chi'} [D_i]
// for every ordered pair.  Returns the first violating pair, if any.
std::optional<RelationViolation> verify_fundamental_relations(
    const BuildingData& bd, Exec exec = Exec::parallel);

// Confronts the abelian-side and lattice-side answers on a fan with
// torsion-free class group:
//  (a) invariant factors of G_max vs N/N'_min,
//  (b) subgroup count vs enumerated covers vs a brute-force enumeration of
//      all HNF sublattices between N'_min and N,
//  (c) building data solve + full relation sweep for the maximal cover.
struct CrossCheckReport {
    std::vector<Int> gmax_factors;
    std::vector<Int> lattice_factors;
    bool groups_match;
    std::size_t subgroup_count;
    std::size_t cover_count;
    std::size_t bruteforce_sublattice_count;
    bool counts_match;
    bool building_data_ok;
    bool ok;
};

CrossCheckReport cross_check_maximal_cover(const Fan& fan, const BranchData& branch,
                                           const Int& bound);

} // namespace coverforge
