#pragma once

#include "kinv/io.hpp"
#include "kinv/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <map>

namespace kinv {
namespace cli {

// Exit-code contract: 0 success / isomorphic, 1 not-isomorphic,
// 2 input error, 3 internal-consistency failure.
inline constexpr int exit_ok = 0;
inline constexpr int exit_not_isomorphic = 1;
inline constexpr int exit_input_error = 2;
inline constexpr int exit_inconsistent = 3;

using io::json;

inline json tool_descriptor() {
    json j;
    j["name"] = tool_name;
    j["version"] = tool_version;
    return j;
}

inline json input_descriptor(const io::ParsedInput& p) {
    json j;
    j["path"] = p.path;
    j["kind"] = p.kind == io::ParsedInput::Kind::Matrix ? "matrix" : "triple";
    j["sha256"] = p.content_sha256;
    return j;
}

inline json hierarchy_to_json(const HierarchyClass& h) {
    json j;
    j["l"] = h.l;
    j["w"] = h.w;
    j["half"] = h.half == HierarchyHalf::Positive ? "Positive" : "NonPositive";
    return j;
}

inline json invariant_report(const io::ParsedInput& in) {
    KTriple t = io::as_triple(in);
    ExtData e = ext_data(t);
    KTriple dual(e.ext_s1, e.iota, e.ext_s0);

    json j;
    j["schema"] = 1;
    j["input"] = input_descriptor(in);
    j["k_triple"] = io::triple_to_json(t);
    j["chi"] = chi(t);
    j["w"] = w_of(t);
    j["hierarchy"] = hierarchy_to_json(hierarchy_class(t));
    json ext;
    ext["s1"] = io::group_to_json(e.ext_s1);
    ext["w1"] = io::group_to_json(e.ext_w1);
    ext["s0"] = io::group_to_json(e.ext_s0);
    ext["w0"] = io::group_to_json(e.ext_w0);
    ext["t1"] = io::group_to_json(direct_sum(e.ext_s1, e.ext_w1));
    ext["t0"] = io::group_to_json(direct_sum(e.ext_s0, e.ext_w0));
    j["ext"] = std::move(ext);
    j["dual_triple"] = io::triple_to_json(dual);
    j["tool"] = tool_descriptor();
    return j;
}

struct IsoOutcome {
    int exit_code;
    std::string diagnostic;  // nonempty only on disagreement
};

inline IsoOutcome decide_iso(const io::ParsedInput& a, const io::ParsedInput& b,
                             const std::string& method) {
    const bool both_matrices = a.kind == io::ParsedInput::Kind::Matrix &&
                               b.kind == io::ParsedInput::Kind::Matrix;
    std::vector<std::pair<std::string, bool>> verdicts;
    auto run_triple_methods = [&](const std::string& m) {
        KTriple ta = io::as_triple(a), tb = io::as_triple(b);
        if (m == "triple" || m == "all") verdicts.emplace_back("triple", iso_triple(ta, tb));
        if (m == "ext-triple" || m == "all")
            verdicts.emplace_back("ext-triple", iso_by_ext_triple(ta, tb));
        if (m == "total" || m == "all") verdicts.emplace_back("total", iso_by_total_ext(ta, tb));
        if (m == "mixed" || m == "all") verdicts.emplace_back("mixed", iso_by_mixed(ta, tb));
    };
    if (method == "oainv" || method == "all") {
        if (both_matrices) {
            verdicts.emplace_back(
                "oainv", ck::iso_ck(ck::validate(a.matrix), ck::validate(b.matrix)));
        } else if (method == "oainv") {
            throw io::ParseError("--method oainv requires two matrix inputs");
        }
    }
    if (method != "oainv") run_triple_methods(method);

    bool first = verdicts.front().second;
    for (const auto& [name, v] : verdicts)
        if (v != first) {
            std::ostringstream os;
            os << "decider disagreement:";
            for (const auto& [n2, v2] : verdicts)
                os << " " << n2 << "=" << (v2 ? "isomorphic" : "not-isomorphic");
            return {exit_inconsistent, os.str()};
        }
    return {first ? exit_ok : exit_not_isomorphic, ""};
}

struct ClassifiedClass {
    json invariants;
    std::vector<std::string> members;
};

inline json classify_directory(const std::filesystem::path& dir, std::size_t* classified_count) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end(),
              [](const auto& x, const auto& y) { return x.filename() < y.filename(); });

    std::map<std::string, ClassifiedClass> classes;  // keyed by canonical invariant text
    json rejected = json::array();
    for (const auto& f : files) {
        try {
            io::ParsedInput in = io::load_input(f.string());
            KTriple t = io::as_triple(in);
            ExtData e = ext_data(t);
            FgAbelianGroup t1 = direct_sum(e.ext_s1, e.ext_w1);
            FgAbelianGroup t0 = direct_sum(e.ext_s0, e.ext_w0);
            std::string key = t1.to_string() + " ; " + t0.to_string();
            auto it = classes.find(key);
            if (it == classes.end()) {
                json inv;
                inv["t1"] = io::group_to_json(t1);
                inv["t0"] = io::group_to_json(t0);
                it = classes.emplace(key, ClassifiedClass{std::move(inv), {}}).first;
            }
            it->second.members.push_back(f.filename().string());
        } catch (const std::exception& e) {
            json r;
            r["file"] = f.filename().string();
            r["error"] = e.what();
            rejected.push_back(std::move(r));
        }
    }

    *classified_count = 0;
    json cls = json::array();
    for (auto& [key, c] : classes) {
        *classified_count += c.members.size();
        json one;
        one["invariants"] = std::move(c.invariants);
        one["members"] = c.members;  // already lexicographic
        cls.push_back(std::move(one));
    }
    json report;
    report["schema"] = 1;
    report["classes"] = std::move(cls);
    report["rejected"] = std::move(rejected);
    report["tool"] = tool_descriptor();
    return report;
}

inline void write_atomically(const std::filesystem::path& target, const std::string& bytes) {
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io::ParseError("cannot write '" + tmp.string() + "'");
        out << bytes;
    }
    std::filesystem::rename(tmp, target);
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact K-theoretic classification invariants for Cuntz-Krieger and "
                 "Kirchberg algebras"};
    app.set_version_flag("--version", std::string(tool_name) + " " + tool_version);
    app.require_subcommand(1);
    app.fallthrough();  // --quiet may come before or after the subcommand
    bool quiet = false;
    app.add_flag("--quiet", quiet, "suppress report bodies; exit codes only");

    std::string in_a, in_b, method = "all", out_path, dir_path;
    bool transforms = false;
    std::size_t recover_rank = 0;
    std::vector<std::string> recover_factors;

    auto* c_inv = app.add_subcommand("invariants", "full invariant report for one input");
    c_inv->add_option("input", in_a, "matrix or triple file")->required();

    auto* c_iso = app.add_subcommand("iso", "decide isomorphism of two inputs");
    c_iso->add_option("a", in_a, "first input")->required();
    c_iso->add_option("b", in_b, "second input")->required();
    c_iso->add_option("--method", method, "triple|ext-triple|total|mixed|oainv|all")
        ->check(CLI::IsMember({"triple", "ext-triple", "total", "mixed", "oainv", "all"}))
        ->capture_default_str();

    auto* c_dual = app.add_subcommand("dual", "K-data of the reciprocal algebra");
    c_dual->add_option("input", in_a, "matrix or triple file")->required();

    auto* c_cls = app.add_subcommand("classify", "partition a directory into isomorphism classes");
    c_cls->add_option("directory", dir_path, "directory of matrix/triple files")->required();
    c_cls->add_option("--out", out_path, "write the JSON report to this file atomically");

    auto* c_snf = app.add_subcommand("snf", "Smith normal form of an integer matrix file");
    c_snf->add_option("input", in_a, "matrix file; header may be 'N' or 'N M'")->required();
    c_snf->add_flag("--transforms", transforms, "include the unimodular transforms U and V");

    auto* c_rec = app.add_subcommand("recover", "split a group into (G, G/Zg) if possible");
    c_rec->add_option("--rank", recover_rank, "free rank of the input group")
        ->capture_default_str();
    c_rec->add_option("factors", recover_factors, "torsion orders of the input group");

    try {
        std::vector<const char*> argv;
        argv.push_back(tool_name);
        for (const auto& s : args) argv.push_back(s.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e, out, err);
        return rc == 0 ? exit_ok : exit_input_error;
    }

    try {
        if (c_inv->parsed()) {
            json report = invariant_report(io::load_input(in_a));
            if (!quiet) out << report.dump(2) << "\n";
            return exit_ok;
        }
        if (c_iso->parsed()) {
            IsoOutcome o = decide_iso(io::load_input(in_a), io::load_input(in_b), method);
            if (o.exit_code == exit_inconsistent) {
                err << o.diagnostic << "\n";
                return exit_inconsistent;
            }
            if (!quiet)
                out << (o.exit_code == exit_ok ? "isomorphic" : "not-isomorphic") << "\n";
            return o.exit_code;
        }
        if (c_dual->parsed()) {
            io::ParsedInput in = io::load_input(in_a);
            KTriple dual = reciprocal_dual(io::as_triple(in));
            json j;
            j["schema"] = 1;
            j["input"] = input_descriptor(in);
            j["dual_triple"] = io::triple_to_json(dual);
            j["tool"] = tool_descriptor();
            if (!quiet) out << j.dump(2) << "\n";
            return exit_ok;
        }
        if (c_cls->parsed()) {
            if (!std::filesystem::is_directory(dir_path))
                throw io::ParseError("'" + dir_path + "' is not a directory");
            std::size_t classified = 0;
            json report = classify_directory(dir_path, &classified);
            if (classified == 0) {
                err << "no inputs could be classified in '" << dir_path << "'\n";
                return exit_input_error;
            }
            std::string bytes = report.dump(2) + "\n";
            if (!out_path.empty()) write_atomically(out_path, bytes);
            if (!quiet) out << bytes;
            return exit_ok;
        }
        if (c_snf->parsed()) {
            std::string content = io::read_file(in_a);
            std::istringstream ss(content);
            IntMatrix m = io::parse_matrix_text(ss);
            SnfResult snf = smith_normal_form(m);
            json j;
            j["schema"] = 1;
            j["rows"] = m.rows();
            j["cols"] = m.cols();
            json diag = json::array();
            for (const Int& d : snf_diagonal(snf)) diag.push_back(d.str());
            j["diagonal"] = std::move(diag);
            if (transforms) {
                auto matrix_json = [](const IntMatrix& mm) {
                    json rows = json::array();
                    for (std::size_t i = 0; i < mm.rows(); ++i) {
                        json row = json::array();
                        for (std::size_t jj = 0; jj < mm.cols(); ++jj)
                            row.push_back(mm(i, jj).str());
                        rows.push_back(std::move(row));
                    }
                    return rows;
                };
                j["u"] = matrix_json(snf.u);
                j["v"] = matrix_json(snf.v);
            }
            if (!quiet) out << j.dump(2) << "\n";
            return exit_ok;
        }
        if (c_rec->parsed()) {
            std::vector<Int> factors;
            for (const auto& f : recover_factors) {
                Int d = io::parse_int(f, 0);
                if (d < 1) throw io::ParseError("factors must be positive");
                factors.push_back(std::move(d));
            }
            IntMatrix rel(recover_rank + factors.size(), factors.size());
            for (std::size_t k = 0; k < factors.size(); ++k) rel(recover_rank + k, k) = factors[k];
            FgAbelianGroup d = cokernel(rel);
            auto [g, q] = recover_pair(d);
            json j;
            j["schema"] = 1;
            j["input_group"] = io::group_to_json(d);
            j["group"] = io::group_to_json(g);
            j["quotient"] = io::group_to_json(q);
            j["tool"] = tool_descriptor();
            if (!quiet) out << j.dump(2) << "\n";
            return exit_ok;
        }
    } catch (const io::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const ck::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const NotRecoverableError& e) {
        err << "error: not recoverable: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return exit_input_error;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return exit_inconsistent;
    }
    return exit_input_error;
}

}  // namespace cli
}  // namespace kinv
