#include "coverforge/abelian.hpp"

#include "coverforge/errors.hpp"

#include <algorithm>
#include <map>


namespace coverforge {

struct FgAbGroup::Impl {
    IntMatrix relations; // k x m, columns are relators
    std::size_t k = 0;

    // SNF cache: U * relations * V = D.
    IntMatrix u;    // k x k
    IntMatrix uinv; // k x k
    std::vector<Int> diag; // length k: D(i,i) padded with 0 past min(k,m)
    std::vector<Int> invariant_factors;    // diag entries >= 2
    std::vector<std::size_t> torsion_pos;  // positions with diag >= 2
    std::vector<std::size_t> free_pos;     // positions with diag == 0
    std::optional<Int> order;              // finite order, if any
    Int exponent = 1;

    Impl(std::size_t gens, IntMatrix rel) : relations(std::move(rel)), k(gens) {
        if (relations.rows() != k)
            throw input_error("relation matrix row count must equal generator count");
        SnfResult s = snf(relations);
        u = std::move(s.U);
        uinv = unimodular_inverse(u);
        diag.assign(k, Int(0));
        std::size_t lim = std::min(k, relations.cols());
        for (std::size_t i = 0; i < lim; ++i)
            diag[i] = s.D(i, i);
        for (std::size_t i = 0; i < k; ++i) {
            if (diag[i] == 0)
                free_pos.push_back(i);
            else if (diag[i] >= 2) {
                torsion_pos.push_back(i);
                invariant_factors.push_back(diag[i]);
            }
        }
        if (free_pos.empty()) {
            Int o = 1;
            for (const Int& f : invariant_factors)
                o *= f;
            order = o;
        }
        exponent = invariant_factors.empty() ? Int(1) : invariant_factors.back();
    }
};

namespace {

Int mod_reduce(const Int& v, const Int& m) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return r;
}

} // namespace

FgAbGroup::FgAbGroup() : impl_(std::make_shared<const Impl>(0, IntMatrix(0, 0))) {}

FgAbGroup::FgAbGroup(std::size_t generators, IntMatrix relations)
    : impl_(std::make_shared<const Impl>(generators, std::move(relations))) {}

std::size_t FgAbGroup::generators() const { return impl().k; }
const IntMatrix& FgAbGroup::relations() const { return impl().relations; }
const std::vector<Int>& FgAbGroup::invariant_factors() const {
    return impl().invariant_factors;
}
std::size_t FgAbGroup::free_rank() const { return impl().free_pos.size(); }
bool FgAbGroup::is_finite() const { return impl().order.has_value(); }
bool FgAbGroup::is_trivial() const {
    return impl().invariant_factors.empty() && impl().free_pos.empty();
}

Int FgAbGroup::order() const {
    if (!impl().order)
        throw input_error("order requested for an infinite group");
    return *impl().order;
}

Int FgAbGroup::exponent() const {
    if (!is_finite())
        throw input_error("exponent requested for an infinite group");
    return impl().exponent;
}

std::vector<Int> FgAbGroup::zero() const { return std::vector<Int>(impl().k, Int(0)); }

std::vector<Int> FgAbGroup::normal_form(std::span<const Int> coords) const {
    const Impl& im = impl();
    if (coords.size() != im.k)
        throw input_error("element coordinate length mismatch");
    std::vector<Int> y = im.u.apply(coords);
    for (std::size_t i = 0; i < im.k; ++i) {
        if (im.diag[i] == 0)
            continue; // free coordinate, kept as is
        if (im.diag[i] == 1)
            y[i] = 0; // killed generator
        else
            y[i] = mod_reduce(y[i], im.diag[i]);
    }
    return y;
}

bool FgAbGroup::is_zero(std::span<const Int> coords) const {
    std::vector<Int> n = normal_form(coords);
    return std::all_of(n.begin(), n.end(), [](const Int& v) { return v == 0; });
}

bool FgAbGroup::equal(std::span<const Int> a, std::span<const Int> b) const {
    return normal_form(a) == normal_form(b);
}

std::vector<Int> FgAbGroup::add(std::span<const Int> a, std::span<const Int> b) const {
    if (a.size() != impl().k || b.size() != impl().k)
        throw input_error("element coordinate length mismatch");
    std::vector<Int> c(impl().k);
    for (std::size_t i = 0; i < impl().k; ++i)
        c[i] = a[i] + b[i];
    return c;
}

std::vector<Int> FgAbGroup::negate(std::span<const Int> a) const {
    std::vector<Int> c(a.begin(), a.end());
    for (Int& v : c)
        v = -v;
    return c;
}

std::vector<Int> FgAbGroup::scale(const Int& n, std::span<const Int> a) const {
    std::vector<Int> c(a.begin(), a.end());
    for (Int& v : c)
        v *= n;
    return c;
}

std::optional<Int> FgAbGroup::element_order(std::span<const Int> coords) const {
    const Impl& im = impl();
    std::vector<Int> y = normal_form(coords);
    for (std::size_t p : im.free_pos)
        if (y[p] != 0)
            return std::nullopt;
    Int o = 1;
    for (std::size_t idx = 0; idx < im.torsion_pos.size(); ++idx) {
        const Int& d = im.invariant_factors[idx];
        Int g;
        mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), y[im.torsion_pos[idx]].get_mpz_t());
        Int part = d / g;
        mpz_lcm(o.get_mpz_t(), o.get_mpz_t(), part.get_mpz_t());
    }
    return o;
}

std::vector<Int> FgAbGroup::decomposition_coords(std::span<const Int> coords) const {
    const Impl& im = impl();
    std::vector<Int> y = normal_form(coords);
    std::vector<Int> dec(im.torsion_pos.size());
    for (std::size_t j = 0; j < im.torsion_pos.size(); ++j)
        dec[j] = y[im.torsion_pos[j]];
    return dec;
}

std::vector<Int> FgAbGroup::from_decomposition_coords(std::span<const Int> dec) const {
    const Impl& im = impl();
    if (dec.size() != im.torsion_pos.size())
        throw input_error("decomposition coordinate length mismatch");
    std::vector<Int> y(im.k, Int(0));
    for (std::size_t j = 0; j < im.torsion_pos.size(); ++j)
        y[im.torsion_pos[j]] = dec[j];
    return im.uinv.apply(y);
}

std::vector<std::vector<Int>> FgAbGroup::elements() const {
    if (!is_finite())
        throw input_error("cannot enumerate an infinite group");
    const Impl& im = impl();
    std::vector<std::vector<Int>> out;
    std::vector<Int> dec(im.invariant_factors.size(), Int(0));
    for (;;) {
        out.push_back(from_decomposition_coords(dec));
        std::size_t j = 0;
        for (; j < dec.size(); ++j) {
            dec[j] += 1;
            if (dec[j] < im.invariant_factors[j])
                break;
            dec[j] = 0;
        }
        if (j == dec.size())
            break;
    }
    return out;
}

FgAbGroup from_invariant_factors(std::span<const Int> factors, std::size_t free_rank) {
    std::vector<Int> kept;
    for (const Int& f : factors) {
        if (f < 1)
            throw input_error("invariant factors must be >= 1");
        if (f > 1)
            kept.push_back(f);
    }
    std::size_t k = kept.size() + free_rank;
    IntMatrix rel = IntMatrix::diagonal(k, kept.size(), kept);
    return FgAbGroup(k, std::move(rel));
}

FgAbGroup free_group(std::size_t rank) {
    return from_invariant_factors(std::span<const Int>{}, rank);
}

FgAbGroup direct_sum_cyclic(std::span<const Int> orders) {
    for (const Int& d : orders)
        if (d < 1)
            throw input_error("cyclic summand orders must be >= 1");
    IntMatrix rel = IntMatrix::diagonal(orders.size(), orders.size(), orders);
    return FgAbGroup(orders.size(), std::move(rel));
}

GroupHom::GroupHom(FgAbGroup src, FgAbGroup tgt, IntMatrix m)
    : source(std::move(src)), target(std::move(tgt)), matrix(std::move(m)) {
    if (matrix.rows() != target.generators() || matrix.cols() != source.generators())
        throw input_error("homomorphism matrix has wrong shape");
    const IntMatrix& rel = source.relations();
    for (std::size_t j = 0; j < rel.cols(); ++j) {
        std::vector<Int> img = matrix.apply(rel.column(j));
        if (!target.is_zero(img))
            throw input_error("matrix does not define a homomorphism: relation "
                              + std::to_string(j) + " is not preserved");
    }
}

std::vector<Int> GroupHom::apply(std::span<const Int> coords) const {
    return matrix.apply(coords);
}

namespace {

// Generating set of {x : B·x in colspan(R)}, as matrix columns.
IntMatrix preimage_lattice(const IntMatrix& b, const IntMatrix& r) {
    IntMatrix block = b.concat_cols(r);
    IntMatrix ker = kernel_basis(block);
    IntMatrix top(b.cols(), ker.cols());
    for (std::size_t i = 0; i < b.cols(); ++i)
        for (std::size_t j = 0; j < ker.cols(); ++j)
            top(i, j) = ker(i, j);
    HnfTransform t = hnf_with_transform(top);
    return t.H.slice_cols(0, t.rank);
}

} // namespace

SubgroupPart subgroup_from_generators(const FgAbGroup& ambient, const IntMatrix& gens) {
    if (gens.rows() != ambient.generators())
        throw input_error("subgroup generators have wrong coordinate length");
    IntMatrix rel = preimage_lattice(gens, ambient.relations());
    FgAbGroup sub(gens.cols(), std::move(rel));
    GroupHom incl(sub, ambient, gens);
    return SubgroupPart{std::move(sub), std::move(incl)};
}

QuotientPart cokernel(const GroupHom& h) {
    IntMatrix rel = h.target.relations().concat_cols(h.matrix);
    FgAbGroup q(h.target.generators(), std::move(rel));
    GroupHom proj(h.target, q, IntMatrix::identity(h.target.generators()));
    return QuotientPart{std::move(q), std::move(proj)};
}

SubgroupPart kernel(const GroupHom& h) {
    IntMatrix gens = preimage_lattice(h.matrix, h.target.relations());
    return subgroup_from_generators(h.source, gens);
}

SubgroupPart image(const GroupHom& h) {
    return subgroup_from_generators(h.target, h.matrix);
}

bool is_injective(const GroupHom& h) {
    return kernel(h).group.is_trivial();
}

DualFree dual_free(const FgAbGroup& a) {
    IntMatrix lk = kernel_basis(a.relations().transposed()); // k x f columns
    IntMatrix pairing = hnf(lk).slice_cols(0, lk.cols()).transposed(); // f x k
    return DualFree{free_group(lk.cols()), std::move(pairing)};
}

SubgroupPart torsion_subgroup(const FgAbGroup& a) {
    std::vector<std::vector<Int>> cols;
    std::size_t t = a.invariant_factors().size();
    for (std::size_t j = 0; j < t; ++j) {
        std::vector<Int> dec(t, Int(0));
        dec[j] = 1;
        cols.push_back(a.from_decomposition_coords(dec));
    }
    return subgroup_from_generators(a, IntMatrix::from_columns(a.generators(), cols));
}

std::vector<SubgroupRecord> subgroups(const FgAbGroup& a, const Int& bound, Exec exec) {
    if (!a.is_finite())
        throw capacity_error("subgroup enumeration requires a finite group");
    if (a.order() > bound)
        throw capacity_error("group order " + a.order().get_str()
                             + " exceeds enumeration bound " + bound.get_str());

    const std::vector<Int>& e = a.invariant_factors();
    const std::size_t t = e.size();

    // Subgroups correspond to lattices L with diag(e)·Z^t <= L <= Z^t,
    // identified by their canonical column-HNF basis.
    IntMatrix base = IntMatrix::diagonal(t, t, e);

    // Nonzero element vectors of the decomposition box.
    std::vector<std::vector<Int>> elems;
    {
        std::vector<Int> dec(t, Int(0));
        for (;;) {
            std::size_t j = 0;
            for (; j < t; ++j) {
                dec[j] += 1;
                if (dec[j] < e[j])
                    break;
                dec[j] = 0;
            }
            if (j == t)
                break;
            elems.push_back(dec);
        }
    }

    std::map<std::string, IntMatrix> found;
    IntMatrix start = hnf(base);
    found.emplace(matrix_key(start), start);
    std::vector<IntMatrix> frontier{start};

    while (!frontier.empty() && !elems.empty()) {
        const std::size_t nwork = frontier.size() * elems.size();
        std::vector<IntMatrix> candidates(nwork);
        auto work = [&](std::size_t idx) {
            const IntMatrix& lat = frontier[idx / elems.size()];
            const std::vector<Int>& v = elems[idx % elems.size()];
            IntMatrix ext = lat.concat_cols(IntMatrix::from_columns(t, {v}));
            candidates[idx] = hnf(ext).slice_cols(0, t);
        };
        if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
            for (long idx = 0; idx < static_cast<long>(nwork); ++idx)
                work(static_cast<std::size_t>(idx));
        } else {
            for (std::size_t idx = 0; idx < nwork; ++idx)
                work(idx);
        }
        std::vector<IntMatrix> next;
        for (std::size_t idx = 0; idx < nwork; ++idx) {
            std::string key = matrix_key(candidates[idx]);
            if (found.emplace(key, candidates[idx]).second)
                next.push_back(candidates[idx]);
        }
        frontier = std::move(next);
    }

    std::vector<SubgroupRecord> out;
    out.reserve(found.size());
    for (const auto& [key, lat] : found) {
        (void)key;
        std::vector<std::vector<Int>> gens;
        for (std::size_t j = 0; j < lat.cols(); ++j) {
            std::vector<Int> dec = lat.column(j);
            for (std::size_t i = 0; i < t; ++i)
                dec[i] = mod_reduce(dec[i], e[i]);
            gens.push_back(a.from_decomposition_coords(dec));
        }
        SubgroupPart part = subgroup_from_generators(
            a, IntMatrix::from_columns(a.generators(), gens));
        out.push_back(SubgroupRecord{std::move(part.group), std::move(part.inclusion), lat});
    }
    std::sort(out.begin(), out.end(), [](const SubgroupRecord& x, const SubgroupRecord& y) {
        return lex_less(x.lattice, y.lattice);
    });
    return out;
}

Character trivial_character(const FgAbGroup& a) {
    if (!a.is_finite())
        throw input_error("characters are only supported on finite groups");
    return Character{a, std::vector<Int>(a.invariant_factors().size(), Int(0))};
}

std::vector<Character> all_characters(const FgAbGroup& a) {
    if (!a.is_finite())
        throw input_error("characters are only supported on finite groups");
    const std::vector<Int>& e = a.invariant_factors();
    std::vector<Character> out;
    std::vector<Int> c(e.size(), Int(0));
    for (;;) {
        out.push_back(Character{a, c});
        std::size_t j = 0;
        for (; j < c.size(); ++j) {
            c[j] += 1;
            if (c[j] < e[j])
                break;
            c[j] = 0;
        }
        if (j == c.size())
            break;
    }
    return out;
}

Character add_characters(const Character& x, const Character& y) {
    if (!x.group.same_group(y.group))
        throw input_error("characters of different groups cannot be added");
    const std::vector<Int>& e = x.group.invariant_factors();
    Character z{x.group, x.coords};
    for (std::size_t j = 0; j < e.size(); ++j)
        z.coords[j] = mod_reduce(z.coords[j] + y.coords[j], e[j]);
    return z;
}

Int character_order(const Character& x) {
    const std::vector<Int>& e = x.group.invariant_factors();
    Int o = 1;
    for (std::size_t j = 0; j < e.size(); ++j) {
        Int g;
        mpz_gcd(g.get_mpz_t(), e[j].get_mpz_t(), x.coords[j].get_mpz_t());
        Int part = e[j] / g;
        mpz_lcm(o.get_mpz_t(), o.get_mpz_t(), part.get_mpz_t());
    }
    return o;
}

Int pair_character(const Character& chi, const FgAbGroup& group,
                   std::span<const Int> elt_coords) {
    if (!chi.group.same_group(group))
        throw input_error("character and element belong to different groups");
    const std::vector<Int>& e = group.invariant_factors();
    Int d = group.exponent();
    std::vector<Int> dec = group.decomposition_coords(elt_coords);
    Int t = 0;
    for (std::size_t j = 0; j < e.size(); ++j)
        t += chi.coords[j] * dec[j] * (d / e[j]);
    return mod_reduce(t, d);
}

} // namespace coverforge
