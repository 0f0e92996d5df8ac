#include "coverforge/class_group.hpp"

#include "coverforge/errors.hpp"

#include <string>

namespace coverforge {

ClassGroupData class_group(const Fan& fan) {
    if (!fan.complete)
        throw input_error("class group requires a complete fan");
    const std::size_t n = fan.rays.size(), s = fan.rank;
    // Relations: the ray-pairing matrix, column j = (<e_j^*, r_i>)_i.
    IntMatrix rel(n, s);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < s; ++j)
            rel(i, j) = fan.rays[i][j];
    FgAbGroup cl(n, rel);
    if (cl.free_rank() != n - s)
        throw internal_error("class group rank is not n - s on a complete fan");
    std::vector<GroupElt> classes;
    for (std::size_t i = 0; i < n; ++i) {
        GroupElt e(n, Int(0));
        e[i] = 1;
        classes.push_back(std::move(e));
    }
    GroupHom proj(free_group(n), cl, IntMatrix::identity(n));
    return ClassGroupData{fan, std::move(cl), std::move(classes), std::move(proj)};
}

ClassGroupData abstract_class_group(std::vector<Int> invariant_factors,
                                    std::size_t free_rank,
                                    std::vector<GroupElt> divisor_classes) {
    FgAbGroup cl = from_invariant_factors(invariant_factors, free_rank);
    for (std::size_t i = 0; i < divisor_classes.size(); ++i)
        if (divisor_classes[i].size() != cl.generators())
            throw input_error("divisor_classes[" + std::to_string(i)
                              + "] has wrong coordinate length (expected "
                              + std::to_string(cl.generators()) + ")");
    const std::size_t n = divisor_classes.size();
    IntMatrix m(cl.generators(), n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < cl.generators(); ++i)
            m(i, j) = divisor_classes[j][i];
    GroupHom proj(free_group(n), cl, std::move(m));
    return ClassGroupData{std::nullopt, std::move(cl), std::move(divisor_classes),
                          std::move(proj)};
}

TorsionCheck torsion_check(const Fan& fan) {
    ClassGroupData data = class_group(fan);
    std::vector<Int> cl_tors = torsion_subgroup(data.cl).group.invariant_factors();

    std::vector<Int> ones(fan.rays.size(), Int(1));
    Sublattice ray_lattice = sublattice_from_multiples(fan, ones);
    std::vector<Int> lat = quotient_group(ray_lattice).group.invariant_factors();

    if (cl_tors != lat)
        throw internal_error("Tors(Cl) and N/<r_i> disagree: "
                             + std::to_string(cl_tors.size()) + " vs "
                             + std::to_string(lat.size()) + " factors");
    return TorsionCheck{cl_tors.empty(), std::move(cl_tors), std::move(lat)};
}

CoverSpec torsion_cover(const Fan& fan) {
    TorsionCheck check = torsion_check(fan);
    std::vector<Int> ones(fan.rays.size(), Int(1));
    Sublattice ray_lattice = sublattice_from_multiples(fan, ones);
    CoverSpec cover = make_cover_spec(fan, std::move(ray_lattice));
    if (cover.galois_group.invariant_factors() != check.cl_torsion_factors)
        throw internal_error("torsion cover group does not match Tors(Cl)");
    Fan refined = refine(fan, cover.sublattice);
    TorsionCheck after = torsion_check(refined);
    if (!after.torsion_free)
        throw internal_error("refined fan still has class group torsion");
    return cover;
}

bool class_group_d_torsion_free(const FgAbGroup& cl, const Int& d) {
    for (const Int& e : cl.invariant_factors()) {
        Int g;
        mpz_gcd(g.get_mpz_t(), e.get_mpz_t(), d.get_mpz_t());
        if (g != 1)
            return false;
    }
    return true;
}

} // namespace coverforge
