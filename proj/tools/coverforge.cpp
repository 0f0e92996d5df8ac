// coverforge: decide, build and verify abelian covers of complete toric
// varieties (and of abstract class-group data) branched on given divisors.
//
// Exit codes: 0 success, 1 input/contract error, 2 the requested cover does
// not exist (a mathematical answer, reported with a per-divisor diagnosis).

#include "coverforge/covers.hpp"
#include "coverforge/errors.hpp"
#include "coverforge/io.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>

using namespace coverforge;
using nlohmann::json;

namespace {

struct JobConfig {
    std::string fan_path;
    std::string abstract_path;
    std::string orders_arg;
    std::string cover_path; // verify: previously emitted cover document
    std::string format = "text";
    long long bound = 10000;
};

bool structured(const JobConfig& cfg) { return cfg.format != "text"; }

void print_json(const json& j) { std::cout << j.dump(2) << "\n"; }

struct Inputs {
    std::optional<Fan> fan;
    ClassGroupData cl;
};

Inputs load_inputs(const JobConfig& cfg, bool need_fan) {
    if (!cfg.fan_path.empty() && !cfg.abstract_path.empty())
        throw input_error("--fan and --abstract are mutually exclusive");
    if (cfg.fan_path.empty() && cfg.abstract_path.empty())
        throw input_error("one of --fan or --abstract is required");
    if (!cfg.fan_path.empty()) {
        Fan fan = parse_fan_json(load_json_file(cfg.fan_path));
        ClassGroupData cl = class_group(fan);
        return Inputs{std::move(fan), std::move(cl)};
    }
    if (need_fan)
        throw input_error("this command needs a fan (--fan)");
    return Inputs{std::nullopt, parse_abstract_json(load_json_file(cfg.abstract_path))};
}

BranchData load_orders(const JobConfig& cfg, std::size_t n) {
    if (cfg.orders_arg.empty())
        throw input_error("--orders is required for this command");
    BranchData b = make_branch(parse_orders_arg(cfg.orders_arg));
    if (b.orders.size() != n)
        throw input_error("--orders has " + std::to_string(b.orders.size())
                          + " entries but the input has " + std::to_string(n)
                          + " divisors");
    return b;
}

int cmd_clgroup(const JobConfig& cfg) {
    Inputs in = load_inputs(cfg, false);
    DualFree dual = dual_free(in.cl.cl);
    json out{{"command", "clgroup"},
             {"class_group", group_json(in.cl.cl)},
             {"divisor_classes", [&] {
                  json a = json::array();
                  for (const auto& c : in.cl.divisor_classes)
                      a.push_back(vec_json(canonical_coords(in.cl.cl, dual, c)));
                  return a;
              }()}};
    std::string text = "class group: " + group_text(in.cl.cl) + "\n";
    text += "divisor classes (torsion, then free):";
    for (const auto& c : in.cl.divisor_classes)
        text += " " + vec_text(canonical_coords(in.cl.cl, dual, c));
    text += "\n";
    if (in.fan) {
        TorsionCheck tc = torsion_check(*in.fan);
        out["torsion_free"] = tc.torsion_free;
        if (!tc.torsion_free) {
            CoverSpec cover = torsion_cover(*in.fan);
            out["torsion_cover"] = cover_spec_json(cover);
            text += "torsion: " + group_text(cover.galois_group) + "\n";
            text += "torsion cover:\n" + cover_spec_text(cover, "  ");
        } else {
            text += "torsion: none\n";
        }
    } else {
        FgAbGroup tors = torsion_subgroup(in.cl.cl).group;
        out["torsion_free"] = tors.is_trivial();
        text += "torsion: " + (tors.is_trivial() ? "none" : group_text(tors)) + "\n";
    }
    if (structured(cfg))
        print_json(out);
    else
        std::cout << text;
    return 0;
}

int cmd_exists(const JobConfig& cfg) {
    Inputs in = load_inputs(cfg, false);
    BranchData branch = load_orders(cfg, in.cl.divisor_classes.size());
    ExistenceReport rep = gmax(in.cl, branch);
    if (in.fan)
        existence_toric(*in.fan, branch); // cross-checks against gmax
    json out = existence_json(rep, branch);
    out["command"] = "exists";
    if (structured(cfg))
        print_json(out);
    else
        std::cout << existence_text(rep, branch);
    return rep.exists ? 0 : 2;
}

int cmd_maxcover(const JobConfig& cfg) {
    Inputs in = load_inputs(cfg, false);
    BranchData branch = load_orders(cfg, in.cl.divisor_classes.size());
    ExistenceReport rep = gmax(in.cl, branch);

    // Fan mode gates on the toric primitivity test; abstract mode on the
    // totally-ramified existence conditions.
    bool buildable = rep.exists;
    if (in.fan) {
        std::vector<bool> toric = existence_toric(*in.fan, branch);
        buildable = std::all_of(toric.begin(), toric.end(), [](bool b) { return b; });
    }
    if (!buildable) {
        if (structured(cfg)) {
            json out = existence_json(rep, branch);
            out["command"] = "maxcover";
            print_json(out);
        } else {
            std::cout << existence_text(rep, branch);
        }
        return 2;
    }

    json out{{"command", "maxcover"}, {"exists", true}};
    std::string text = "exists: yes\n";

    if (in.fan) {
        CoverSpec cover = max_toric_cover(*in.fan, branch);
        out.update(cover_spec_json(cover));
        text += cover_spec_text(cover);
    } else {
        out["galois_group"] = group_json(rep.g_max);
        text += "galois group: " + group_text(rep.g_max) + "\n";
    }

    // Building data for the maximal totally ramified cover, when the class
    // group allows a unique solution.
    if (rep.exists
        && class_group_d_torsion_free(in.cl.cl, rep.g_max.is_trivial()
                                                    ? Int(1)
                                                    : rep.g_max.exponent())) {
        std::vector<GroupElt> gs;
        const std::size_t n = branch.orders.size();
        for (std::size_t i = 0; i < n; ++i) {
            GroupElt e(n, Int(0));
            e[i] = 1;
            gs.push_back(rep.projection.apply(e));
        }
        AbelianCoverData acd = make_abelian_cover(rep.g_max, std::move(gs), branch);
        BuildingData bd = solve_building_data(in.cl, acd);
        out["building_data"] = building_data_json(bd);
        text += building_data_text(bd);
    } else if (!rep.torsion_condition_ok) {
        out["torsion_note"] = "class group has d-torsion: the maximal "
                              "totally-ramified identification does not apply; "
                              "see the torsion-cover command";
        text += "note: class group has d-torsion; see torsion-cover\n";
    }
    if (structured(cfg))
        print_json(out);
    else
        std::cout << text;
    return 0;
}

int cmd_covers(const JobConfig& cfg) {
    Inputs in = load_inputs(cfg, true);
    BranchData branch = load_orders(cfg, in.cl.divisor_classes.size());
    std::vector<CoverSpec> covers = enumerate_covers(*in.fan, branch, Int(static_cast<long>(cfg.bound)));
    if (structured(cfg)) {
        json arr = json::array();
        for (const auto& c : covers)
            arr.push_back(cover_spec_json(c));
        print_json(json{{"command", "covers"}, {"count", covers.size()},
                        {"covers", arr}});
    } else {
        std::cout << "covers: " << covers.size() << "\n";
        for (std::size_t i = 0; i < covers.size(); ++i) {
            std::cout << "cover " << i << ":\n";
            std::cout << cover_spec_text(covers[i], "  ");
        }
    }
    return 0;
}

int cmd_verify(const JobConfig& cfg) {
    Inputs in = load_inputs(cfg, true);
    if (cfg.cover_path.empty())
        throw input_error("--cover FILE (a maxcover document or a "
                          "{\"sublattice_basis\": ...} object) is required");
    json doc = load_json_file(cfg.cover_path);
    if (!doc.contains("sublattice_basis"))
        throw input_error("cover file is missing field \"sublattice_basis\"");
    const json& basis = doc["sublattice_basis"];
    if (!basis.is_array() || basis.empty())
        throw input_error("\"sublattice_basis\" must be a non-empty array of columns");
    std::vector<std::vector<Int>> cols;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        std::vector<Int> col;
        for (const auto& v : basis[j])
            col.push_back(v.is_string() ? Int(v.get<std::string>())
                                        : Int(static_cast<long>(v.get<long long>())));
        if (col.size() != in.fan->rank)
            throw input_error("sublattice_basis[" + std::to_string(j)
                              + "] has wrong length");
        cols.push_back(std::move(col));
    }
    Sublattice sub = make_sublattice(in.fan->rank,
                                     IntMatrix::from_columns(in.fan->rank, cols));
    CoverSpec cover = make_cover_spec(*in.fan, std::move(sub));

    bool ok = true;
    std::string mismatch;
    if (!cfg.orders_arg.empty()) {
        BranchData branch = load_orders(cfg, in.cl.divisor_classes.size());
        if (cover.ram_orders != branch.orders) {
            ok = false;
            mismatch = "ramification orders do not match --orders";
        }
    }
    if (ok && doc.contains("index")
        && Int(doc["index"].get<std::string>()) != cover.sublattice.index) {
        ok = false;
        mismatch = "index in file does not match recomputed index";
    }
    if (ok && doc.contains("galois_group")) {
        json expect = doc["galois_group"];
        json got = group_json(cover.galois_group);
        if (expect != got) {
            ok = false;
            mismatch = "galois_group in file does not match recomputed group";
        }
    }
    if (structured(cfg)) {
        json out = cover_spec_json(cover);
        out["command"] = "verify";
        out["verified"] = ok;
        if (!ok)
            out["mismatch"] = mismatch;
        print_json(out);
    } else {
        std::cout << cover_spec_text(cover);
        std::cout << "verified: " << (ok ? "yes" : ("NO (" + mismatch + ")")) << "\n";
    }
    return ok ? 0 : 1;
}

int cmd_torsion_cover(const JobConfig& cfg) {
    Inputs in = load_inputs(cfg, true);
    CoverSpec cover = torsion_cover(*in.fan);
    if (structured(cfg)) {
        json out = cover_spec_json(cover);
        out["command"] = "torsion-cover";
        print_json(out);
    } else {
        std::cout << cover_spec_text(cover);
    }
    return 0;
}

int cmd_crosscheck(const JobConfig& cfg) {
    Inputs in = load_inputs(cfg, true);
    BranchData branch = load_orders(cfg, in.cl.divisor_classes.size());
    CrossCheckReport rep = cross_check_maximal_cover(*in.fan, branch, Int(static_cast<long>(cfg.bound)));
    if (structured(cfg)) {
        json out = crosscheck_json(rep);
        out["command"] = "crosscheck";
        print_json(out);
    } else {
        std::cout << crosscheck_text(rep);
    }
    return rep.ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"abelian covers of complete toric varieties: existence, maximal "
                 "cover, enumeration, building data"};
    app.require_subcommand(1);

    JobConfig cfg;
    auto add_common = [&](CLI::App* sub, bool with_orders) {
        sub->add_option("--fan", cfg.fan_path, "fan JSON file");
        sub->add_option("--abstract", cfg.abstract_path, "abstract class-group JSON file");
        if (with_orders)
            sub->add_option("--orders", cfg.orders_arg,
                            "branch orders: CSV (e.g. 2,3,6) or a JSON array file");
        sub->add_option("--format", cfg.format, "text | json")
            ->check(CLI::IsMember({"text", "json", "structured"}));
        sub->add_option("--bound", cfg.bound, "subgroup enumeration capacity")
            ->envname("COVERFORGE_BOUND")
            ->check(CLI::PositiveNumber);
    };

    auto* clgroup = app.add_subcommand("clgroup", "divisor class group and torsion");
    add_common(clgroup, false);
    auto* exists = app.add_subcommand("exists", "decide whether the cover exists");
    add_common(exists, true);
    auto* maxcover = app.add_subcommand("maxcover", "construct the maximal cover");
    add_common(maxcover, true);
    auto* covers = app.add_subcommand("covers", "enumerate all intermediate covers");
    add_common(covers, true);
    auto* verify = app.add_subcommand("verify", "re-verify an emitted cover");
    add_common(verify, true);
    verify->add_option("--cover", cfg.cover_path, "cover JSON document to verify");
    auto* torsion = app.add_subcommand("torsion-cover", "the cover killing Cl torsion");
    add_common(torsion, false);
    auto* crosscheck = app.add_subcommand("crosscheck",
                                          "confront abelian and toric answers");
    add_common(crosscheck, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (clgroup->parsed())
            return cmd_clgroup(cfg);
        if (exists->parsed())
            return cmd_exists(cfg);
        if (maxcover->parsed())
            return cmd_maxcover(cfg);
        if (covers->parsed())
            return cmd_covers(cfg);
        if (verify->parsed())
            return cmd_verify(cfg);
        if (torsion->parsed())
            return cmd_torsion_cover(cfg);
        if (crosscheck->parsed())
            return cmd_crosscheck(cfg);
    } catch (const nonexistence_error& e) {
        std::cerr << "does not exist: " << e.what() << "\n";
        return 2;
    } catch (const capacity_error& e) {
        std::cerr << "capacity: " << e.what() << "\n";
        return 1;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const internal_error& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
