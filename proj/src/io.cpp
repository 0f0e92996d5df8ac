#include "coverforge/io.hpp"

#include "coverforge/errors.hpp"

#include <fstream>
#include <sstream>

namespace coverforge {

using nlohmann::json;

namespace {

Int json_int(const json& j, const std::string& where) {
    if (j.is_number_integer())
        return Int(static_cast<long>(j.get<long long>()));
    if (j.is_string())
        return Int(j.get<std::string>()); // large integers arrive as strings
    throw input_error(where + " must be an integer");
}

std::vector<Int> json_int_vector(const json& j, const std::string& where) {
    if (!j.is_array())
        throw input_error(where + " must be an array of integers");
    std::vector<Int> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(json_int(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

} // namespace

Fan parse_fan_json(const json& j) {
    if (!j.is_object())
        throw input_error("fan file must contain a JSON object");
    for (const char* key : {"rank", "rays", "cones", "complete"})
        if (!j.contains(key))
            throw input_error(std::string("fan file is missing field \"") + key + "\"");
    if (!j["rank"].is_number_integer() || j["rank"].get<long long>() < 1)
        throw input_error("\"rank\" must be a positive integer");
    std::size_t rank = j["rank"].get<std::size_t>();
    if (!j["rays"].is_array())
        throw input_error("\"rays\" must be an array");
    std::vector<std::vector<Int>> rays;
    for (std::size_t i = 0; i < j["rays"].size(); ++i)
        rays.push_back(json_int_vector(j["rays"][i], "rays[" + std::to_string(i) + "]"));
    if (!j["cones"].is_array())
        throw input_error("\"cones\" must be an array");
    std::vector<std::vector<std::size_t>> cones;
    for (std::size_t i = 0; i < j["cones"].size(); ++i) {
        const json& c = j["cones"][i];
        if (!c.is_array())
            throw input_error("cones[" + std::to_string(i) + "] must be an array");
        std::vector<std::size_t> cone;
        for (std::size_t k = 0; k < c.size(); ++k) {
            if (!c[k].is_number_integer() || c[k].get<long long>() < 0)
                throw input_error("cones[" + std::to_string(i) + "]["
                                  + std::to_string(k)
                                  + "] must be a non-negative ray index");
            cone.push_back(c[k].get<std::size_t>());
        }
        cones.push_back(std::move(cone));
    }
    if (!j["complete"].is_boolean())
        throw input_error("\"complete\" must be a boolean");
    return make_fan(rank, std::move(rays), std::move(cones), j["complete"].get<bool>());
}

ClassGroupData parse_abstract_json(const json& j) {
    if (!j.is_object() || !j.contains("cl") || !j.contains("divisor_classes"))
        throw input_error("abstract file needs fields \"cl\" and \"divisor_classes\"");
    const json& cl = j["cl"];
    if (!cl.is_object() || !cl.contains("invariant_factors") || !cl.contains("free_rank"))
        throw input_error("\"cl\" needs fields \"invariant_factors\" and \"free_rank\"");
    std::vector<Int> factors = json_int_vector(cl["invariant_factors"],
                                               "cl.invariant_factors");
    if (!cl["free_rank"].is_number_integer() || cl["free_rank"].get<long long>() < 0)
        throw input_error("cl.free_rank must be a non-negative integer");
    std::size_t fr = cl["free_rank"].get<std::size_t>();
    if (!j["divisor_classes"].is_array())
        throw input_error("\"divisor_classes\" must be an array");
    std::vector<GroupElt> classes;
    for (std::size_t i = 0; i < j["divisor_classes"].size(); ++i)
        classes.push_back(json_int_vector(j["divisor_classes"][i],
                                          "divisor_classes[" + std::to_string(i) + "]"));
    return abstract_class_group(std::move(factors), fr, std::move(classes));
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw input_error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

std::vector<Int> parse_orders_arg(const std::string& arg) {
    std::ifstream probe(arg);
    if (probe.good()) {
        json j = load_json_file(arg);
        return json_int_vector(j, "orders file");
    }
    std::vector<Int> out;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty())
            throw input_error("empty entry in --orders");
        try {
            out.push_back(Int(tok));
        } catch (const std::invalid_argument&) {
            throw input_error("--orders entry is not an integer: " + tok);
        }
    }
    if (out.empty())
        throw input_error("--orders is empty");
    return out;
}

json group_json(const FgAbGroup& g) {
    json factors = json::array();
    for (const Int& f : g.invariant_factors())
        factors.push_back(f.get_str());
    return json{{"invariant_factors", factors},
                {"free_rank", g.free_rank()}};
}

std::vector<Int> canonical_coords(const FgAbGroup& g, const DualFree& dual,
                                  const GroupElt& x) {
    std::vector<Int> out = g.decomposition_coords(x);
    for (const Int& v : dual.pairing.apply(x))
        out.push_back(v);
    return out;
}

std::string group_text(const FgAbGroup& g) {
    if (g.is_trivial())
        return "0";
    std::string s;
    if (g.free_rank() == 1)
        s = "Z";
    else if (g.free_rank() > 1)
        s = "Z^" + std::to_string(g.free_rank());
    for (const Int& f : g.invariant_factors())
        s += (s.empty() ? "" : " + ") + std::string("Z/") + f.get_str();
    return s;
}

json vec_json(std::span<const Int> v) {
    json out = json::array();
    for (const Int& x : v)
        out.push_back(x.get_str());
    return out;
}

std::string vec_text(std::span<const Int> v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + v[i].get_str();
    return s + ")";
}

json matrix_cols_json(const IntMatrix& m) {
    json out = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
        out.push_back(vec_json(m.column(j)));
    return out;
}

json fan_json(const Fan& fan) {
    json rays = json::array();
    for (const auto& r : fan.rays)
        rays.push_back(vec_json(r));
    json cones = json::array();
    for (const auto& c : fan.cones)
        cones.push_back(c);
    return json{{"rank", fan.rank},
                {"rays", rays},
                {"cones", cones},
                {"complete", fan.complete}};
}

json cover_spec_json(const CoverSpec& c) {
    return json{{"sublattice_basis", matrix_cols_json(c.sublattice.basis)},
                {"index", c.sublattice.index.get_str()},
                {"galois_group", group_json(c.galois_group)},
                {"ram_orders", vec_json(c.ram_orders)},
                {"refined_rays", fan_json(refine(c.fan, c.sublattice))["rays"]}};
}

std::string cover_spec_text(const CoverSpec& c, const std::string& indent) {
    std::ostringstream os;
    os << indent << "galois group: " << group_text(c.galois_group) << "\n";
    os << indent << "sublattice index: " << c.sublattice.index.get_str() << "\n";
    os << indent << "sublattice basis (columns):";
    for (std::size_t j = 0; j < c.sublattice.basis.cols(); ++j)
        os << " " << vec_text(c.sublattice.basis.column(j));
    os << "\n";
    os << indent << "ramification orders:";
    for (std::size_t i = 0; i < c.ram_orders.size(); ++i)
        os << (i ? "," : " ") << c.ram_orders[i].get_str();
    os << "\n";
    Fan refined = refine(c.fan, c.sublattice);
    os << indent << "refined rays:";
    for (const auto& r : refined.rays)
        os << " " << vec_text(r);
    os << "\n";
    return os.str();
}

json existence_json(const ExistenceReport& r, const BranchData& branch) {
    json inj = json::array();
    for (bool b : r.per_divisor_injective)
        inj.push_back(b);
    return json{{"orders", vec_json(branch.orders)},
                {"k_min", group_json(r.k_min)},
                {"g_max", group_json(r.g_max)},
                {"per_divisor_injective", inj},
                {"torsion_condition_ok", r.torsion_condition_ok},
                {"exists", r.exists}};
}

std::string existence_text(const ExistenceReport& r, const BranchData& branch) {
    std::ostringstream os;
    os << "orders:";
    for (std::size_t i = 0; i < branch.orders.size(); ++i)
        os << (i ? "," : " ") << branch.orders[i].get_str();
    os << "\n";
    os << "K_min: " << group_text(r.k_min) << "\n";
    os << "G_max: " << group_text(r.g_max) << "\n";
    for (std::size_t i = 0; i < r.per_divisor_injective.size(); ++i) {
        if (r.per_divisor_injective[i])
            os << "divisor " << i << ": Z/" << branch.orders[i].get_str()
               << " -> G_max injective\n";
        else
            os << "Z/" << branch.orders[i].get_str()
               << " -> G_max not injective at divisor " << i << "\n";
    }
    os << "torsion condition Cl[" << branch.lcm.get_str()
       << "] = 0: " << (r.torsion_condition_ok ? "yes" : "no") << "\n";
    os << "exists: " << (r.exists ? "yes" : "no") << "\n";
    return os.str();
}

json building_data_json(const BuildingData& bd) {
    json orders = json::array();
    for (const Int& m : bd.char_orders)
        orders.push_back(m.get_str());
    json classes = json::array();
    for (const auto& l : bd.l_classes)
        classes.push_back(vec_json(l));
    return json{{"basis_character_orders", orders},
                {"l_classes", classes},
                {"basis_dependent", true}};
}

std::string building_data_text(const BuildingData& bd) {
    std::ostringstream os;
    os << "building data (basis-dependent): ";
    if (bd.char_orders.empty()) {
        os << "empty\n";
        return os.str();
    }
    os << "character orders";
    for (const Int& m : bd.char_orders)
        os << " " << m.get_str();
    os << "; L classes";
    for (const auto& l : bd.l_classes)
        os << " " << vec_text(l);
    os << "\n";
    return os.str();
}

json crosscheck_json(const CrossCheckReport& r) {
    json gf = json::array(), lf = json::array();
    for (const Int& f : r.gmax_factors)
        gf.push_back(f.get_str());
    for (const Int& f : r.lattice_factors)
        lf.push_back(f.get_str());
    return json{{"gmax_invariant_factors", gf},
                {"lattice_invariant_factors", lf},
                {"groups_match", r.groups_match},
                {"subgroup_count", r.subgroup_count},
                {"cover_count", r.cover_count},
                {"bruteforce_sublattice_count", r.bruteforce_sublattice_count},
                {"counts_match", r.counts_match},
                {"building_data_ok", r.building_data_ok},
                {"ok", r.ok}};
}

std::string crosscheck_text(const CrossCheckReport& r) {
    std::ostringstream os;
    auto factors = [](const std::vector<Int>& f) {
        std::string s = "[";
        for (std::size_t i = 0; i < f.size(); ++i)
            s += (i ? "," : "") + f[i].get_str();
        return s + "]";
    };
    os << "G_max invariant factors: " << factors(r.gmax_factors) << "\n";
    os << "N/N'_min invariant factors: " << factors(r.lattice_factors) << "\n";
    os << "groups match: " << (r.groups_match ? "yes" : "NO") << "\n";
    os << "subgroups of G_max: " << r.subgroup_count << "\n";
    os << "enumerated covers: " << r.cover_count << "\n";
    os << "brute-force intermediate sublattices: " << r.bruteforce_sublattice_count
       << "\n";
    os << "counts match: " << (r.counts_match ? "yes" : "NO") << "\n";
    os << "building data solve + relations: " << (r.building_data_ok ? "ok" : "FAILED")
       << "\n";
    os << "crosscheck: " << (r.ok ? "ok" : "FALSIFIED") << "\n";
    return os.str();
}

} // namespace coverforge
