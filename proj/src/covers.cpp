#include "coverforge/covers.hpp"

#include "coverforge/errors.hpp"

#include <algorithm>
#include <string>

namespace coverforge {

BranchData make_branch(std::vector<Int> orders) {
    Int l = 1;
    for (std::size_t i = 0; i < orders.size(); ++i) {
        if (orders[i] < 1)
            throw input_error("orders[" + std::to_string(i) + "] must be >= 1");
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), orders[i].get_mpz_t());
    }
    return BranchData{std::move(orders), std::move(l)};
}

PhiData phi(const ClassGroupData& cl, const BranchData& branch) {
    const std::size_t n = cl.divisor_classes.size();
    if (branch.orders.size() != n)
        throw input_error("orders length " + std::to_string(branch.orders.size())
                          + " does not match divisor count " + std::to_string(n));
    DualFree dual = dual_free(cl.cl);
    const std::size_t t = dual.dual.generators();
    IntMatrix m(n, t);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<Int> p = dual.pairing.apply(cl.divisor_classes[i]);
        for (std::size_t j = 0; j < t; ++j)
            m(i, j) = p[j];
    }
    FgAbGroup sum = direct_sum_cyclic(branch.orders);
    GroupHom hom(dual.dual, sum, std::move(m));
    return PhiData{std::move(sum), std::move(hom), std::move(dual)};
}

ExistenceReport gmax(const ClassGroupData& cl, const BranchData& branch) {
    PhiData ph = phi(cl, branch);
    FgAbGroup k_min = image(ph.hom).group;
    QuotientPart q = cokernel(ph.hom);

    const std::size_t n = branch.orders.size();
    std::vector<bool> injective(n, false);
    bool all = true;
    for (std::size_t i = 0; i < n; ++i) {
        GroupElt e(n, Int(0));
        e[i] = 1;
        Int o = *q.group.element_order(q.projection.apply(e));
        injective[i] = (o == branch.orders[i]);
        all = all && injective[i];
    }
    bool torsion_ok = class_group_d_torsion_free(cl.cl, branch.lcm);
    return ExistenceReport{std::move(ph.sum), std::move(q.projection),
                           std::move(k_min),  std::move(q.group),
                           std::move(injective), torsion_ok, all && torsion_ok};
}

std::vector<bool> existence_toric(const Fan& fan, const BranchData& branch) {
    if (!fan.complete)
        throw input_error("toric existence test requires a complete fan");
    Sublattice n_min = sublattice_from_multiples(fan, branch.orders);
    std::vector<Int> ram = ramification_orders(fan, n_min);
    std::vector<bool> out(ram.size());
    for (std::size_t i = 0; i < ram.size(); ++i)
        out[i] = (ram[i] == branch.orders[i]);

    ClassGroupData cl = class_group(fan);
    if (torsion_subgroup(cl.cl).group.is_trivial()) {
        ExistenceReport rep = gmax(cl, branch);
        if (rep.per_divisor_injective != out)
            throw internal_error("toric primitivity and G_max injectivity disagree "
                                 "on a torsion-free fan");
    }
    return out;
}

CoverSpec max_toric_cover(const Fan& fan, const BranchData& branch) {
    std::vector<bool> ok = existence_toric(fan, branch);
    std::vector<std::size_t> bad;
    for (std::size_t i = 0; i < ok.size(); ++i)
        if (!ok[i])
            bad.push_back(i);
    if (!bad.empty()) {
        std::string msg = "no cover with the requested orders: divisor";
        for (std::size_t i : bad)
            msg += " " + std::to_string(i);
        msg += " would have smaller ramification";
        throw nonexistence_error(msg, bad);
    }
    Sublattice n_min = sublattice_from_multiples(fan, branch.orders);
    CoverSpec cover = make_cover_spec(fan, std::move(n_min));
    if (cover.ram_orders != branch.orders)
        throw internal_error("maximal cover ramification does not reproduce the input");
    ClassGroupData cl = class_group(fan);
    if (torsion_subgroup(cl.cl).group.is_trivial()) {
        ExistenceReport rep = gmax(cl, branch);
        if (rep.g_max.invariant_factors() != cover.galois_group.invariant_factors())
            throw internal_error("G_max and N/N'_min have different invariant factors");
    }
    return cover;
}

std::vector<CoverSpec> enumerate_covers(const Fan& fan, const BranchData& branch,
                                        const Int& bound, Exec exec) {
    CoverSpec maximal = max_toric_cover(fan, branch);
    if (maximal.sublattice.index > bound)
        throw capacity_error("deck group order " + maximal.sublattice.index.get_str()
                             + " exceeds bound " + bound.get_str());
    std::vector<SubgroupRecord> subs = subgroups(maximal.galois_group, bound, exec);

    std::vector<CoverSpec> covers(subs.size());
    auto work = [&](std::size_t i) {
        const SubgroupRecord& h = subs[i];
        // N' = N'_min + lifts of H's generators (coordinates in Z^s already).
        IntMatrix gens = maximal.sublattice.basis.concat_cols(h.inclusion.matrix);
        covers[i] = make_cover_spec(fan, make_sublattice(fan.rank, gens));
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < static_cast<long>(subs.size()); ++i)
            work(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < subs.size(); ++i)
            work(i);
    }

    std::sort(covers.begin(), covers.end(), [](const CoverSpec& a, const CoverSpec& b) {
        return lex_less(a.sublattice.basis, b.sublattice.basis);
    });
    covers.erase(std::unique(covers.begin(), covers.end(),
                             [](const CoverSpec& a, const CoverSpec& b) {
                                 return a.sublattice.basis == b.sublattice.basis;
                             }),
                 covers.end());
    return covers;
}

Int chi_bar(const Character& chi, const FgAbGroup& group, const GroupElt& g) {
    Int t = pair_character(chi, group, g);
    Int d = group.exponent();
    Int o = *group.element_order(g);
    Int num = t * o;
    Int a, r;
    mpz_tdiv_qr(a.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), d.get_mpz_t());
    if (r != 0)
        throw internal_error("chi_bar: pairing not a multiple of d/o(g)");
    return a;
}

int epsilon(const Character& chi, const Character& chi_prime, const FgAbGroup& group,
            const GroupElt& g) {
    Int s = chi_bar(chi, group, g) + chi_bar(chi_prime, group, g);
    Int o = *group.element_order(g);
    Int e;
    mpz_fdiv_q(e.get_mpz_t(), s.get_mpz_t(), o.get_mpz_t());
    if (e != 0 && e != 1)
        throw internal_error("epsilon outside {0,1}");
    return static_cast<int>(e.get_si());
}

AbelianCoverData make_abelian_cover(FgAbGroup group,
                                    std::vector<GroupElt> branch_elements,
                                    BranchData branch) {
    if (!group.is_finite())
        throw input_error("abelian cover group must be finite");
    if (branch_elements.size() != branch.orders.size())
        throw input_error("branch element count does not match order count");
    for (std::size_t i = 0; i < branch_elements.size(); ++i) {
        Int o = *group.element_order(branch_elements[i]);
        if (o != branch.orders[i])
            throw input_error("branch element " + std::to_string(i) + " has order "
                              + o.get_str() + ", expected "
                              + branch.orders[i].get_str());
    }
    IntMatrix gens = IntMatrix::from_columns(group.generators(), branch_elements);
    bool total = subgroup_from_generators(group, gens).group.order() == group.order();
    return AbelianCoverData{std::move(group), std::move(branch_elements),
                            std::move(branch), total};
}

namespace {

// Solve m*x = b in the presented group: [m*I | relations]·(x; y) = b.
std::optional<GroupElt> solve_in_group(const FgAbGroup& g, const Int& m,
                                       const GroupElt& b) {
    const std::size_t k = g.generators();
    IntMatrix scaled = IntMatrix::identity(k);
    for (std::size_t i = 0; i < k; ++i)
        scaled(i, i) = m;
    IntMatrix block = scaled.concat_cols(g.relations());
    auto sol = solve(block, b);
    if (!sol)
        return std::nullopt;
    return GroupElt(sol->begin(), sol->begin() + k);
}

} // namespace

BuildingData solve_building_data(const ClassGroupData& cl,
                                 const AbelianCoverData& cover) {
    if (cover.branch.orders.size() != cl.divisor_classes.size())
        throw input_error("cover and class group disagree on divisor count");
    if (!cover.totally_ramified)
        throw input_error("building data requires a totally ramified cover");
    Int d = cover.group.exponent();
    if (!class_group_d_torsion_free(cl.cl, d))
        throw input_error("Cl[" + d.get_str() + "] != 0: the solution of the "
                          "reduced relations is not unique; use the torsion "
                          "cover route instead");

    const std::vector<Int>& e = cover.group.invariant_factors();
    std::vector<Character> chars;
    std::vector<Int> orders;
    std::vector<GroupElt> l_classes;
    for (std::size_t j = 0; j < e.size(); ++j) {
        std::vector<Int> coords(e.size(), Int(0));
        coords[j] = 1;
        Character chi{cover.group, std::move(coords)};
        Int m = e[j];

        GroupElt rhs = cl.cl.zero();
        for (std::size_t i = 0; i < cover.branch.orders.size(); ++i) {
            Int cb = chi_bar(chi, cover.group, cover.branch_elements[i]);
            Int num = m * cb;
            Int coef, rem;
            mpz_tdiv_qr(coef.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(),
                        cover.branch.orders[i].get_mpz_t());
            if (rem != 0)
                throw internal_error("reduced relation coefficient not integral");
            if (coef != 0)
                rhs = cl.cl.add(rhs, cl.cl.scale(coef, cl.divisor_classes[i]));
        }
        auto l = solve_in_group(cl.cl, m, rhs);
        if (!l)
            throw nonexistence_error("cover does not exist over this class group: "
                                     "no class L with " + m.get_str()
                                     + "L = relation right-hand side for basis "
                                     "character " + std::to_string(j), {});
        if (!cl.cl.equal(cl.cl.scale(m, *l), rhs))
            throw internal_error("building data re-substitution failed");
        chars.push_back(std::move(chi));
        orders.push_back(std::move(m));
        l_classes.push_back(std::move(*l));
    }
    return BuildingData{cover, cl, std::move(chars), std::move(orders),
                        std::move(l_classes)};
}

namespace {

// Mixed-radix rank of character coordinates; index into the L table.
std::size_t char_rank(const std::vector<Int>& coords, const std::vector<Int>& e) {
    std::size_t r = 0;
    for (std::size_t j = e.size(); j-- > 0;)
        r = r * e[j].get_ui() + coords[j].get_ui();
    return r;
}

// L_chi for every character, built from the basis classes by iterating the
// fundamental relations along the first nonzero coordinate.
std::vector<GroupElt> derive_all_classes(const BuildingData& bd,
                                         const std::vector<Character>& chars) {
    const FgAbGroup& g = bd.cover.group;
    const FgAbGroup& cl = bd.cl.cl;
    const std::vector<Int>& e = g.invariant_factors();
    std::vector<GroupElt> l(chars.size(), cl.zero());
    for (std::size_t idx = 0; idx < chars.size(); ++idx) {
        const Character& chi = chars[idx];
        std::size_t j = e.size();
        for (std::size_t jj = 0; jj < e.size(); ++jj)
            if (chi.coords[jj] != 0) {
                j = jj;
                break;
            }
        if (j == e.size())
            continue; // trivial character, L = 0
        Character prev{g, chi.coords};
        prev.coords[j] -= 1;
        std::size_t prev_idx = char_rank(prev.coords, e);
        GroupElt val = cl.add(l[prev_idx], bd.l_classes[j]);
        for (std::size_t i = 0; i < bd.cover.branch.orders.size(); ++i) {
            int eps = epsilon(prev, bd.basis_chars[j], g, bd.cover.branch_elements[i]);
            if (eps)
                val = cl.add(val, cl.negate(bd.cl.divisor_classes[i]));
        }
        l[idx] = std::move(val);
    }
    return l;
}

} // namespace

std::optional<RelationViolation> verify_fundamental_relations(const BuildingData& bd,
                                                              Exec exec) {
    const FgAbGroup& g = bd.cover.group;
    const FgAbGroup& cl = bd.cl.cl;
    std::vector<Character> chars = all_characters(g);
    const std::vector<Int>& e = g.invariant_factors();
    std::vector<GroupElt> l = derive_all_classes(bd, chars);

    // chibar table: one row per character, one column per branch divisor.
    const std::size_t n = bd.cover.branch.orders.size();
    std::vector<std::vector<Int>> cb(chars.size(), std::vector<Int>(n));
    for (std::size_t c = 0; c < chars.size(); ++c)
        for (std::size_t i = 0; i < n; ++i)
            cb[c][i] = chi_bar(chars[c], g, bd.cover.branch_elements[i]);
    std::vector<Int> elt_orders(n);
    for (std::size_t i = 0; i < n; ++i)
        elt_orders[i] = *g.element_order(bd.cover.branch_elements[i]);

    const std::size_t total = chars.size() * chars.size();
    std::vector<unsigned char> bad(total, 0);
    auto work = [&](std::size_t pair) {
        std::size_t x = pair / chars.size();
        std::size_t y = pair % chars.size();
        Character sum_chi = add_characters(chars[x], chars[y]);
        std::size_t z = char_rank(sum_chi.coords, e);
        GroupElt lhs = cl.add(l[x], l[y]);
        GroupElt rhs = l[z];
        for (std::size_t i = 0; i < n; ++i) {
            Int s = cb[x][i] + cb[y][i];
            Int epsv;
            mpz_fdiv_q(epsv.get_mpz_t(), s.get_mpz_t(), elt_orders[i].get_mpz_t());
            if (epsv != 0)
                rhs = cl.add(rhs, cl.scale(epsv, bd.cl.divisor_classes[i]));
        }
        if (!cl.equal(lhs, rhs))
            bad[pair] = 1;
    };
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (long p = 0; p < static_cast<long>(total); ++p)
            work(static_cast<std::size_t>(p));
    } else {
        for (std::size_t p = 0; p < total; ++p)
            work(p);
    }
    for (std::size_t p = 0; p < total; ++p)
        if (bad[p])
            return RelationViolation{p / chars.size(), p % chars.size()};
    return std::nullopt;
}

namespace {

// All column-HNF bases of sublattices of Z^s whose index divides `index` and
// which contain the given lattice.  Enumerates every lower-triangular
// candidate directly and tests containment by forward substitution.
std::size_t brute_force_intermediate_count(const Sublattice& inner, const Int& index) {
    const std::size_t s = inner.ambient_rank;
    std::vector<Int> divisors;
    for (Int d = 1; d <= index; ++d)
        if (mpz_divisible_p(index.get_mpz_t(), d.get_mpz_t()))
            divisors.push_back(d);

    std::size_t count = 0;
    IntMatrix cand(s, s);
    auto contains_inner = [&]() {
        for (std::size_t j = 0; j < s; ++j) {
            std::vector<Int> b = inner.basis.column(j);
            // forward substitution on the lower-triangular candidate
            std::vector<Int> x(s);
            for (std::size_t i = 0; i < s; ++i) {
                Int acc = b[i];
                for (std::size_t k = 0; k < i; ++k)
                    acc -= cand(i, k) * x[k];
                Int q, r;
                mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), acc.get_mpz_t(),
                            cand(i, i).get_mpz_t());
                if (r != 0)
                    return false;
                x[i] = q;
            }
        }
        return true;
    };

    // Recursive fill: diagonal entries multiply to a divisor of `index`,
    // below-diagonal entries in a pivot row run through [0, diagonal).
    auto rec = [&](auto&& self, std::size_t row, Int remaining) -> void {
        if (row == s) {
            if (contains_inner())
                ++count;
            return;
        }
        for (const Int& d : divisors) {
            if (!mpz_divisible_p(remaining.get_mpz_t(), d.get_mpz_t()))
                continue;
            cand(row, row) = d;
            // off-diagonal entries of this row, columns < row
            std::vector<Int> off(row, Int(0));
            for (;;) {
                for (std::size_t j = 0; j < row; ++j)
                    cand(row, j) = off[j];
                self(self, row + 1, remaining / d);
                std::size_t j = 0;
                for (; j < row; ++j) {
                    off[j] += 1;
                    if (off[j] < d)
                        break;
                    off[j] = 0;
                }
                if (j == row)
                    break;
            }
        }
    };
    rec(rec, 0, index);
    return count;
}

} // namespace

CrossCheckReport cross_check_maximal_cover(const Fan& fan, const BranchData& branch,
                                           const Int& bound) {
    ClassGroupData cl = class_group(fan);
    if (!torsion_subgroup(cl.cl).group.is_trivial())
        throw input_error("cross-check requires a torsion-free class group");

    CrossCheckReport rep{};
    ExistenceReport ex = gmax(cl, branch);
    CoverSpec maximal = max_toric_cover(fan, branch);

    rep.gmax_factors = ex.g_max.invariant_factors();
    rep.lattice_factors = maximal.galois_group.invariant_factors();
    rep.groups_match = (rep.gmax_factors == rep.lattice_factors);

    if (ex.g_max.order() > bound)
        throw capacity_error("G_max order exceeds bound " + bound.get_str());

    rep.subgroup_count = subgroups(maximal.galois_group, bound).size();
    rep.cover_count = enumerate_covers(fan, branch, bound).size();
    rep.bruteforce_sublattice_count =
        brute_force_intermediate_count(maximal.sublattice, maximal.sublattice.index);
    rep.counts_match = rep.subgroup_count == rep.cover_count
                       && rep.cover_count == rep.bruteforce_sublattice_count;

    // Abelian side: branch elements are the images of 1 in Z_{d_i}.
    std::vector<GroupElt> gs;
    for (std::size_t i = 0; i < branch.orders.size(); ++i) {
        GroupElt e(branch.orders.size(), Int(0));
        e[i] = 1;
        gs.push_back(ex.projection.apply(e));
    }
    AbelianCoverData acd = make_abelian_cover(ex.g_max, std::move(gs), branch);
    BuildingData bd = solve_building_data(cl, acd);
    rep.building_data_ok = !verify_fundamental_relations(bd).has_value();

    rep.ok = rep.groups_match && rep.counts_match && rep.building_data_ok;
    return rep;
}

} // namespace coverforge
