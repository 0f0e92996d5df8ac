#include "coverforge/fan.hpp"

#include "coverforge/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace coverforge {

namespace {

std::string vec_str(std::span<const Int> v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + v[i].get_str();
    return s + ")";
}

Int cross2(std::span<const Int> a, std::span<const Int> b) {
    return a[0] * b[1] - a[1] * b[0];
}

// Angular order on nonzero vectors in Z^2, starting at the positive x-axis.
bool angle_less(const std::vector<Int>& a, const std::vector<Int>& b) {
    auto half = [](const std::vector<Int>& v) {
        return (v[1] > 0 || (v[1] == 0 && v[0] > 0)) ? 0 : 1;
    };
    int ha = half(a), hb = half(b);
    if (ha != hb)
        return ha < hb;
    return cross2(a, b) > 0;
}

bool point_in_simplex_subset(const Fan& fan, const std::vector<std::size_t>& subset,
                             std::span<const Int> p) {
    const std::size_t s = fan.rank, u = subset.size();
    IntMatrix t(s, u);
    for (std::size_t j = 0; j < u; ++j)
        for (std::size_t i = 0; i < s; ++i)
            t(i, j) = fan.rays[subset[j]][i];
    // Pick u independent rows for the square Cramer system: the pivot rows
    // of the column HNF restrict t to a nonsingular u x u submatrix.
    std::vector<std::size_t> rows;
    {
        HnfTransform ht = hnf_with_transform(t);
        if (ht.rank != u)
            return false; // dependent subset, skip
        rows = ht.pivot_rows;
    }
    IntMatrix sq(u, u);
    for (std::size_t i = 0; i < u; ++i)
        for (std::size_t j = 0; j < u; ++j)
            sq(i, j) = t(rows[i], j);
    Int delta = det(sq);
    if (delta == 0)
        return false;
    std::vector<Int> y(u);
    for (std::size_t j = 0; j < u; ++j) {
        IntMatrix rep = sq;
        for (std::size_t i = 0; i < u; ++i)
            rep(i, j) = p[rows[i]];
        y[j] = det(rep);
        // lambda_j = y_j / delta must be >= 0
        if (sgn(y[j]) != 0 && sgn(y[j]) != sgn(delta))
            return false;
    }
    // Consistency on all rows: T·y == delta·p.
    std::vector<Int> ty = t.apply(y);
    for (std::size_t i = 0; i < s; ++i)
        if (ty[i] != delta * p[i])
            return false;
    return true;
}

// Is p in the cone spanned by the given rays?  By Caratheodory for cones it
// suffices to test subsets of at most `rank` linearly independent rays, with
// exact sign checks on Cramer determinants.
bool point_in_cone(const Fan& fan, const std::vector<std::size_t>& cone,
                   std::span<const Int> p) {
    const std::size_t s = fan.rank;
    std::size_t m = cone.size();
    std::size_t cap = std::min(m, s);
    // Enumerate subsets of size 1..cap.
    std::vector<std::size_t> subset;
    for (std::size_t size = 1; size <= cap; ++size) {
        std::vector<std::size_t> comb(size);
        std::iota(comb.begin(), comb.end(), std::size_t{0});
        for (;;) {
            subset.clear();
            for (std::size_t c : comb)
                subset.push_back(cone[c]);
            if (point_in_simplex_subset(fan, subset, p))
                return true;
            // next combination
            std::size_t i = size;
            while (i > 0 && comb[i - 1] == m - size + (i - 1))
                --i;
            if (i == 0)
                break;
            ++comb[i - 1];
            for (std::size_t j = i; j < size; ++j)
                comb[j] = comb[j - 1] + 1;
        }
    }
    return false;
}

void check_complete_rank2(const Fan& fan) {
    std::vector<std::size_t> order(fan.rays.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return angle_less(fan.rays[a], fan.rays[b]);
    });
    if (fan.rays.size() < 3)
        throw input_error("fan marked complete but has fewer than 3 rays in rank 2");
    std::vector<std::vector<std::size_t>> two_cones;
    for (const auto& c : fan.cones)
        if (c.size() == 2) {
            auto cc = c;
            std::sort(cc.begin(), cc.end());
            two_cones.push_back(cc);
        }
    for (std::size_t i = 0; i < order.size(); ++i) {
        std::size_t a = order[i], b = order[(i + 1) % order.size()];
        if (cross2(fan.rays[a], fan.rays[b]) <= 0)
            throw input_error("fan marked complete but consecutive rays "
                              + std::to_string(a) + "," + std::to_string(b)
                              + " do not span a valid cone");
        std::vector<std::size_t> want{a, b};
        std::sort(want.begin(), want.end());
        if (std::find(two_cones.begin(), two_cones.end(), want) == two_cones.end())
            throw input_error("fan marked complete but cone {" + std::to_string(a)
                              + "," + std::to_string(b) + "} is missing");
    }
    for (const auto& c : two_cones) {
        bool consecutive = false;
        for (std::size_t i = 0; i < order.size(); ++i) {
            std::vector<std::size_t> pair{order[i], order[(i + 1) % order.size()]};
            std::sort(pair.begin(), pair.end());
            if (pair == c)
                consecutive = true;
        }
        if (!consecutive)
            throw input_error("cone {" + std::to_string(c[0]) + ","
                              + std::to_string(c[1])
                              + "} is not a pair of angularly consecutive rays");
    }
}

void check_complete_rank1(const Fan& fan) {
    bool plus = false, minus = false;
    for (const auto& r : fan.rays) {
        if (r[0] == 1)
            plus = true;
        if (r[0] == -1)
            minus = true;
    }
    if (!plus || !minus)
        throw input_error("fan marked complete but rays do not cover the line");
}

void check_complete_sampled(const Fan& fan) {
    std::vector<std::vector<Int>> samples;
    // Unit directions first; they catch half-space fans deterministically.
    for (std::size_t i = 0; i < fan.rank; ++i)
        for (int sgn : {1, -1}) {
            std::vector<Int> p(fan.rank, Int(0));
            p[i] = sgn;
            samples.push_back(p);
        }
    std::mt19937 rng(0x5eedu);
    std::uniform_int_distribution<int> dist(-9, 9);
    while (samples.size() < 64 + 2 * fan.rank) {
        std::vector<Int> p(fan.rank);
        bool nonzero = false;
        for (std::size_t i = 0; i < fan.rank; ++i) {
            int v = dist(rng);
            p[i] = v;
            nonzero = nonzero || v != 0;
        }
        if (nonzero)
            samples.push_back(p);
    }
    for (const auto& p : samples) {
        bool covered = false;
        for (const auto& c : fan.cones)
            if (point_in_cone(fan, c, p)) {
                covered = true;
                break;
            }
        if (!covered)
            throw input_error("fan marked complete but the point " + vec_str(p)
                              + " is not covered by any cone");
    }
}

} // namespace

Fan make_fan(std::size_t rank, std::vector<std::vector<Int>> rays,
             std::vector<std::vector<std::size_t>> cones, bool complete) {
    Fan fan{rank, std::move(rays), std::move(cones), complete};
    if (rank == 0)
        throw input_error("rank must be positive");
    for (std::size_t i = 0; i < fan.rays.size(); ++i) {
        const auto& r = fan.rays[i];
        if (r.size() != rank)
            throw input_error("rays[" + std::to_string(i) + "] has wrong length");
        Int g = gcd_vec(r);
        if (g == 0)
            throw input_error("rays[" + std::to_string(i) + "] is the zero vector");
        if (g != 1)
            throw input_error("rays[" + std::to_string(i) + "] is not primitive");
        for (std::size_t j = 0; j < i; ++j)
            if (fan.rays[j] == r)
                throw input_error("rays[" + std::to_string(i) + "] duplicates rays["
                                  + std::to_string(j) + "]");
    }
    std::vector<bool> used(fan.rays.size(), false);
    for (std::size_t ci = 0; ci < fan.cones.size(); ++ci) {
        const auto& c = fan.cones[ci];
        if (c.empty())
            throw input_error("cones[" + std::to_string(ci) + "] is empty");
        for (std::size_t ri : c) {
            if (ri >= fan.rays.size())
                throw input_error("cones[" + std::to_string(ci)
                                  + "] references missing ray "
                                  + std::to_string(ri));
            used[ri] = true;
        }
        if (c.size() <= rank) {
            IntMatrix m(rank, c.size());
            for (std::size_t j = 0; j < c.size(); ++j)
                for (std::size_t i = 0; i < rank; ++i)
                    m(i, j) = fan.rays[c[j]][i];
            if (coverforge::rank(m) != c.size())
                throw input_error("cones[" + std::to_string(ci)
                                  + "] has linearly dependent rays");
        }
    }
    for (std::size_t i = 0; i < used.size(); ++i)
        if (!used[i])
            throw input_error("rays[" + std::to_string(i) + "] appears in no cone");

    if (fan.complete) {
        if (rank == 1)
            check_complete_rank1(fan);
        else if (rank == 2)
            check_complete_rank2(fan);
        else
            check_complete_sampled(fan);
    }
    return fan;
}

std::vector<Int> primitive(std::span<const Int> v) {
    Int g = gcd_vec(v);
    if (g == 0)
        throw input_error("primitive: zero vector");
    std::vector<Int> out(v.begin(), v.end());
    for (Int& x : out)
        x /= g;
    return out;
}

Sublattice make_sublattice(std::size_t ambient_rank, const IntMatrix& generators) {
    if (generators.rows() != ambient_rank)
        throw input_error("sublattice generators have wrong coordinate length");
    HnfTransform t = hnf_with_transform(generators);
    if (t.rank != ambient_rank)
        throw input_error("generators span a rank-deficient sublattice");
    IntMatrix basis = t.H.slice_cols(0, ambient_rank);
    Int idx = 1;
    for (std::size_t i = 0; i < ambient_rank; ++i)
        idx *= basis(i, i);
    return Sublattice{ambient_rank, std::move(basis), idx};
}

bool sublattice_contains(const Sublattice& sub, std::span<const Int> v) {
    return solve(sub.basis, v).has_value();
}

QuotientPart quotient_group(const Sublattice& sub) {
    FgAbGroup q(sub.ambient_rank, sub.basis);
    FgAbGroup ambient = free_group(sub.ambient_rank);
    GroupHom proj(ambient, q, IntMatrix::identity(sub.ambient_rank));
    return QuotientPart{std::move(q), std::move(proj)};
}

std::vector<Int> ramification_orders(const Fan& fan, const Sublattice& sub) {
    if (fan.rank != sub.ambient_rank)
        throw input_error("fan and sublattice rank mismatch");
    const std::size_t s = fan.rank;
    Int delta = abs(det(sub.basis));
    std::vector<Int> out;
    out.reserve(fan.rays.size());
    for (const auto& r : fan.rays) {
        // Cramer: x_j = det(B with column j <- r) / det(B); the least d with
        // d*x integral is lcm_j delta / gcd(delta, y_j).
        Int d = 1;
        for (std::size_t j = 0; j < s; ++j) {
            IntMatrix rep = sub.basis;
            for (std::size_t i = 0; i < s; ++i)
                rep(i, j) = r[i];
            Int y = abs(det(rep));
            Int g;
            mpz_gcd(g.get_mpz_t(), delta.get_mpz_t(), y.get_mpz_t());
            Int part = delta / g;
            mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), part.get_mpz_t());
        }
        out.push_back(d);
    }
    return out;
}

Sublattice sublattice_from_multiples(const Fan& fan, std::span<const Int> orders) {
    if (orders.size() != fan.rays.size())
        throw input_error("orders length does not match ray count");
    for (std::size_t i = 0; i < orders.size(); ++i)
        if (orders[i] < 1)
            throw input_error("orders[" + std::to_string(i) + "] must be >= 1");
    IntMatrix gens(fan.rank, fan.rays.size());
    for (std::size_t j = 0; j < fan.rays.size(); ++j)
        for (std::size_t i = 0; i < fan.rank; ++i)
            gens(i, j) = orders[j] * fan.rays[j][i];
    return make_sublattice(fan.rank, gens);
}

Fan refine(const Fan& fan, const Sublattice& sub) {
    std::vector<Int> orders = ramification_orders(fan, sub);
    std::vector<std::vector<Int>> new_rays;
    new_rays.reserve(fan.rays.size());
    for (std::size_t i = 0; i < fan.rays.size(); ++i) {
        std::vector<Int> target(fan.rank);
        for (std::size_t k = 0; k < fan.rank; ++k)
            target[k] = orders[i] * fan.rays[i][k];
        auto u = solve(sub.basis, target);
        if (!u)
            throw internal_error("ray multiple not in sublattice");
        new_rays.push_back(primitive(*u));
    }
    return make_fan(fan.rank, std::move(new_rays), fan.cones, fan.complete);
}

CoverSpec make_cover_spec(const Fan& fan, Sublattice sub) {
    if (fan.rank != sub.ambient_rank)
        throw input_error("fan and sublattice rank mismatch");
    QuotientPart q = quotient_group(sub);
    if (q.group.order() != sub.index)
        throw internal_error("quotient order disagrees with sublattice index");
    std::vector<Int> ram = ramification_orders(fan, sub);
    return CoverSpec{fan, std::move(sub), std::move(q.group), std::move(ram)};
}

bool fans_isomorphic(const Fan& a, const Fan& b) {
    if (a.rank != b.rank || a.rays.size() != b.rays.size()
        || a.cones.size() != b.cones.size())
        return false;
    const std::size_t s = a.rank, n = a.rays.size();

    // Fix s linearly independent rays of a.
    std::vector<std::size_t> base;
    {
        IntMatrix m(s, 0);
        for (std::size_t i = 0; i < n && base.size() < s; ++i) {
            IntMatrix ext = m.concat_cols(
                IntMatrix::from_columns(s, {a.rays[i]}));
            if (rank(ext) > base.size()) {
                base.push_back(i);
                m = std::move(ext);
            }
        }
        if (base.size() < s)
            return false;
    }
    IntMatrix ma(s, s);
    for (std::size_t j = 0; j < s; ++j)
        for (std::size_t i = 0; i < s; ++i)
            ma(i, j) = a.rays[base[j]][i];
    Int da = det(ma);

    auto cone_key = [](std::vector<std::size_t> c) {
        std::sort(c.begin(), c.end());
        return c;
    };
    std::vector<std::vector<std::size_t>> bcones;
    for (const auto& c : b.cones)
        bcones.push_back(cone_key(c));
    std::sort(bcones.begin(), bcones.end());

    // Try all images for the base rays; T = MB * MA^{-1} must be integral
    // with |det| = 1 and map rays onto rays, cones onto cones.
    std::vector<std::size_t> pick(s, 0);
    for (;;) {
        bool distinct = true;
        for (std::size_t i = 0; i < s && distinct; ++i)
            for (std::size_t j = i + 1; j < s && distinct; ++j)
                if (pick[i] == pick[j])
                    distinct = false;
        if (distinct) {
            IntMatrix mb(s, s);
            for (std::size_t j = 0; j < s; ++j)
                for (std::size_t i = 0; i < s; ++i)
                    mb(i, j) = b.rays[pick[j]][i];
            if (abs(det(mb)) == abs(da)) {
                // T integral iff MB * adj(MA) divisible by det(MA).
                bool ok = true;
                IntMatrix t(s, s);
                // adj(MA) = det(MA) * MA^{-1}: column k solves MA x = det*e_k.
                IntMatrix adj(s, s);
                for (std::size_t k = 0; k < s && ok; ++k) {
                    std::vector<Int> e(s, Int(0));
                    e[k] = da;
                    auto x = solve(ma, e);
                    if (!x) {
                        ok = false;
                        break;
                    }
                    for (std::size_t i = 0; i < s; ++i)
                        adj(i, k) = (*x)[i];
                }
                if (ok) {
                    IntMatrix num = mb * adj;
                    for (std::size_t i = 0; i < s && ok; ++i)
                        for (std::size_t j = 0; j < s && ok; ++j) {
                            Int q, r;
                            mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(),
                                        num(i, j).get_mpz_t(), da.get_mpz_t());
                            if (r != 0)
                                ok = false;
                            else
                                t(i, j) = q;
                        }
                }
                if (ok && abs(det(t)) == 1) {
                    // Ray bijection.
                    std::vector<std::size_t> perm(n, n);
                    bool bij = true;
                    for (std::size_t i = 0; i < n && bij; ++i) {
                        std::vector<Int> img = t.apply(a.rays[i]);
                        std::size_t found = n;
                        for (std::size_t j = 0; j < n; ++j)
                            if (b.rays[j] == img) {
                                found = j;
                                break;
                            }
                        if (found == n)
                            bij = false;
                        perm[i] = found;
                    }
                    if (bij) {
                        std::vector<std::vector<std::size_t>> acones;
                        for (const auto& c : a.cones) {
                            std::vector<std::size_t> mapped;
                            for (std::size_t ri : c)
                                mapped.push_back(perm[ri]);
                            acones.push_back(cone_key(mapped));
                        }
                        std::sort(acones.begin(), acones.end());
                        if (acones == bcones)
                            return true;
                    }
                }
            }
        }
        std::size_t i = 0;
        for (; i < s; ++i) {
            if (++pick[i] < n)
                break;
            pick[i] = 0;
        }
        if (i == s)
            break;
    }
    return false;
}

} // namespace coverforge
