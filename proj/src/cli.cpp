#include "heegner/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "heegner/report_json.hpp"

namespace heegner {

using nlohmann::json;

namespace {

std::uint64_t budget_from_env() {
    const char* env = std::getenv("HEEGNER_ORACLE_BUDGET");
    if (!env) return oracle::default_budget;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || v == 0) return oracle::default_budget;
    return (std::uint64_t)v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

// "p:kind:params" with kind ps | st | sc, e.g. "3:sc:ram,2" or "11:st:0"
void apply_rep_spec(AnalyzeRequest& req, const std::string& spec) {
    auto parts = split(spec, ':');
    if (parts.size() < 2) throw std::invalid_argument("bad rep override '" + spec + "'");
    std::int64_t p = std::stoll(parts[0]);
    const std::string& kind = parts[1];
    if (kind == "ps") {
        unsigned n = 0;
        for (auto& [q, e] : req.n_factored)
            if (q == p) n = e;
        req.reps[p] = LocalRepType::principal_series(n);
        return;
    }
    if (parts.size() < 3) throw std::invalid_argument("rep override '" + spec + "' needs parameters");
    auto params = split(parts[2], ',');
    if (kind == "st") {
        req.reps[p] = LocalRepType::steinberg(p, (unsigned)std::stoul(params.at(0)));
        return;
    }
    if (kind == "sc") {
        if (params.at(0) == "exceptional") {
            req.reps[p] = LocalRepType::exceptional_supercuspidal();
            return;
        }
        if (params.size() < 2)
            throw std::invalid_argument("supercuspidal override needs 'class,psi_conductor'");
        bool minimal = params.size() < 3 || params[2] != "nonminimal";
        req.reps[p] = LocalRepType::supercuspidal(p, class_from_name(params[0], p),
                                                  (unsigned)std::stoul(params[1]), minimal);
        return;
    }
    throw std::invalid_argument("rep override kind must be ps, st or sc");
}

int run_analysis(const AnalyzeRequest& req, std::ostream& out, std::ostream& err, bool pretty) {
    QuadOrder k(req.disc, req.c);
    HeegnerReport rep = analyze(req.to_input(), k, req.c, req.sigma_overrides, req.extras, req.assertions);
    json j = report_to_json(rep, req);
    out << (pretty ? j.dump(2) : j.dump()) << "\n";
    if (rep.status == AnalysisStatus::Blocked) {
        err << "blocked: " << rep.blocked_reason << "\n";
        return 3;
    }
    err << (rep.exists ? "Heegner points exist" : "no Heegner points") << " (level " << rep.level << ", c'="
        << rep.c_prime << ")\n";
    return rep.exists ? 0 : 2;
}

// Minimal CSV reader honoring double quotes.
std::vector<std::string> csv_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char ch = line[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += ch;
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    fields.push_back(cur);
    return fields;
}

oracle::ModelKind kind_from_name(const std::string& name) {
    if (name == "eichler") return oracle::ModelKind::Eichler;
    if (name == "cartan") return oracle::ModelKind::Cartan;
    if (name == "division") return oracle::ModelKind::Division;
    throw std::invalid_argument("case must be eichler, cartan or division");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Heegner point existence on quaternionic Shimura curves"};
    app.require_subcommand(1);

    // analyze
    auto* analyze_cmd = app.add_subcommand("analyze", "decide Heegner point existence for one input");
    std::string request_file;
    std::int64_t opt_n = 0, opt_disc = 0, opt_c = 1;
    std::string opt_mode = "elliptic", opt_sigma;
    std::vector<std::string> opt_reps, opt_relations;
    bool assert_lprime = false, assert_nocm = false, not_primitive = false, not_two_minimal = false;
    bool pretty = false;
    analyze_cmd->add_option("--request", request_file, "JSON request file");
    analyze_cmd->add_option("--N", opt_n, "curve conductor (factored internally)");
    analyze_cmd->add_option("--disc", opt_disc, "fundamental discriminant of K (negative)");
    analyze_cmd->add_option("--c", opt_c, "conductor of the ring class character");
    analyze_cmd->add_option("--mode", opt_mode, "elliptic (fixed conductor) or abelian (adjustable)");
    analyze_cmd->add_option("--sigma", opt_sigma, "comma list pinning the finite part of Sigma");
    analyze_cmd->add_option("--rep", opt_reps, "local type override p:kind:params (kind ps|st|sc)");
    analyze_cmd->add_option("--steinberg-relation", opt_relations,
                            "p:0|1 asserting the chi/psi norm relation at a Steinberg prime");
    analyze_cmd->add_flag("--assert-l-prime-nonzero", assert_lprime, "assert L'(1) != 0 (echoed)");
    analyze_cmd->add_flag("--assert-no-cm", assert_nocm, "assert no CM over subfields (echoed)");
    analyze_cmd->add_flag("--not-primitive", not_primitive, "the form is a twist of lower level");
    analyze_cmd->add_flag("--not-two-minimal", not_two_minimal, "2-component not of minimal conductor");
    analyze_cmd->add_flag("--pretty", pretty, "indent the JSON output");

    // embed
    auto* embed_cmd = app.add_subcommand("embed", "single local optimal-embedding verdict");
    std::string embed_case, k_class_name = "unram", l_class_name = "unram";
    std::int64_t embed_p = 0, embed_m = 0;
    unsigned embed_n = 0;
    embed_cmd->add_option("--case", embed_case, "eichler | cartan | division")->required();
    embed_cmd->add_option("--p", embed_p, "prime")->required();
    embed_cmd->add_option("--m", embed_m, "conductor exponent of the quadratic order")->required();
    embed_cmd->add_option("--n", embed_n, "level exponent of the quaternion order")->required();
    embed_cmd->add_option("--K-class", k_class_name, "class of K_p (split|inert|unram|ram|ram-unit|ram-prime|sqrtD)");
    embed_cmd->add_option("--L-class", l_class_name, "class of L (division case)");

    // oracle-verify
    auto* verify_cmd = app.add_subcommand("oracle-verify", "brute-force check of the embedding tables");
    std::string verify_case = "eichler";
    std::int64_t verify_p = 3, verify_max_m = 2;
    unsigned verify_max_n = 3, verify_precision = 0;
    std::uint64_t verify_budget = budget_from_env();
    bool no_counts = false, print_cells = false;
    verify_cmd->add_option("--p", verify_p, "prime (2, 3 or 5)")->required();
    verify_cmd->add_option("--case", verify_case, "eichler | cartan | division")->required();
    verify_cmd->add_option("--max-m", verify_max_m, "largest conductor exponent");
    verify_cmd->add_option("--max-n", verify_max_n, "largest level exponent");
    verify_cmd->add_option("--precision", verify_precision, "force the working precision k (default: policy)");
    verify_cmd->add_option("--budget", verify_budget, "class-count budget on |order/p^k|");
    verify_cmd->add_flag("--no-counts", no_counts, "skip class-count comparisons");
    verify_cmd->add_flag("--cells", print_cells, "emit the full per-cell report");

    // batch
    auto* batch_cmd = app.add_subcommand("batch", "analyze a CSV table of curves");
    std::string table_file;
    std::int64_t batch_disc = 0, batch_c = 1;
    std::string batch_mode = "elliptic", batch_sigma;
    batch_cmd->add_option("--table", table_file, "CSV: label,N[,\"rep;rep;...\"] with a header row")->required();
    batch_cmd->add_option("--disc", batch_disc, "fundamental discriminant of K")->required();
    batch_cmd->add_option("--c", batch_c, "character conductor");
    batch_cmd->add_option("--mode", batch_mode, "elliptic or abelian");
    batch_cmd->add_option("--sigma", batch_sigma, "comma list pinning the finite part of Sigma");

    std::vector<std::string> argv_storage(args.begin(), args.end());
    std::vector<const char*> argv;
    argv.push_back("heegner");
    for (auto& a : argv_storage) argv.push_back(a.c_str());
    try {
        app.parse((int)argv.size(), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (*analyze_cmd) {
            AnalyzeRequest req;
            if (!request_file.empty()) {
                std::ifstream in(request_file);
                if (!in) throw std::invalid_argument("cannot open request file " + request_file);
                json j = json::parse(in);
                req = request_from_json(j);
            } else {
                if (opt_n < 2 || opt_disc >= 0)
                    throw std::invalid_argument("analyze needs --N and a negative --disc (or --request)");
                json j;
                j["N"] = opt_n;
                j["disc"] = opt_disc;
                j["c"] = opt_c;
                j["mode"] = opt_mode;
                if (!opt_sigma.empty()) {
                    json sig = json::array();
                    for (auto& tok : split(opt_sigma, ','))
                        if (!tok.empty()) sig.push_back(std::stoll(tok));
                    j["sigma"] = sig;
                }
                j["primitive"] = !not_primitive;
                j["two_minimal"] = !not_two_minimal;
                j["assertions"] = {{"l_prime_nonzero", assert_lprime}, {"no_cm", assert_nocm}};
                req = request_from_json(j);
                for (auto& spec : opt_reps) apply_rep_spec(req, spec);
                for (auto& spec : opt_relations) {
                    auto parts = split(spec, ':');
                    if (parts.size() != 2)
                        throw std::invalid_argument("bad --steinberg-relation '" + spec + "'");
                    EpsilonExtras e;
                    e.steinberg_norm_relation = std::stoi(parts[1]) != 0;
                    req.extras[std::stoll(parts[0])] = e;
                }
            }
            return run_analysis(req, out, err, pretty);
        }

        if (*embed_cmd) {
            EmbeddingVerdict v;
            if (embed_case == "eichler") {
                SplittingType s;
                if (k_class_name == "split")
                    s = SplittingType::Split;
                else if (k_class_name == "inert" || k_class_name == "unram")
                    s = SplittingType::Inert;
                else if (k_class_name == "ram" || k_class_name == "ramified")
                    s = SplittingType::Ramified;
                else
                    s = is_ramified_class(class_from_name(k_class_name, embed_p)) ? SplittingType::Ramified
                                                                                  : SplittingType::Inert;
                v = eichler_exists(embed_m, embed_n, s);
            } else if (embed_case == "cartan") {
                v = cartan_exists(embed_m, embed_n);
            } else if (embed_case == "division") {
                v = division_exists(embed_p, embed_m, embed_n, class_from_name(k_class_name, embed_p),
                                    class_from_name(l_class_name, embed_p));
            } else {
                throw std::invalid_argument("embed --case must be eichler, cartan or division");
            }
            out << verdict_to_json(v).dump() << "\n";
            return v.exists ? 0 : 1;
        }

        if (*verify_cmd) {
            if (verify_p != 2 && verify_p != 3 && verify_p != 5) {
                err << "error: prime exceeds oracle budget (supported: 2, 3, 5)\n";
                return 1;
            }
            oracle::VerifyReport rep =
                oracle::verify_table(kind_from_name(verify_case), verify_p, verify_max_m, verify_max_n,
                                     verify_budget, !no_counts, verify_precision);
            json j = verify_report_to_json(rep);
            if (!print_cells) j.erase("cells");
            out << j.dump() << "\n";
            err << (rep.all_match ? "all cells match" : "MISMATCH") << " (" << rep.cells.size()
                << " cells, " << rep.skipped << " skipped)\n";
            return rep.all_match ? 0 : 1;
        }

        if (*batch_cmd) {
            std::ifstream in(table_file);
            if (!in) {
                err << "error: cannot open table " << table_file << "\n";
                return 1;
            }
            std::string line;
            if (!std::getline(in, line)) {
                err << "error: empty table (header row required)\n";
                return 1;
            }
            std::size_t malformed = 0, row_no = 1;
            while (std::getline(in, line)) {
                ++row_no;
                if (line.empty()) continue;
                try {
                    auto fields = csv_fields(line);
                    if (fields.size() < 2) throw std::invalid_argument("need at least label,N");
                    std::int64_t n = std::stoll(fields[1]);
                    if (n < 2) throw std::invalid_argument("N must be >= 2");
                    json jr;
                    jr["N"] = n;
                    jr["disc"] = batch_disc;
                    jr["c"] = batch_c;
                    jr["mode"] = batch_mode;
                    if (!batch_sigma.empty()) {
                        json sig = json::array();
                        for (auto& tok : split(batch_sigma, ','))
                            if (!tok.empty()) sig.push_back(std::stoll(tok));
                        jr["sigma"] = sig;
                    }
                    AnalyzeRequest req = request_from_json(jr);
                    if (fields.size() >= 3 && !fields[2].empty())
                        for (auto& spec : split(fields[2], ';'))
                            if (!spec.empty()) apply_rep_spec(req, spec);
                    QuadOrder k(req.disc, req.c);
                    HeegnerReport rep =
                        analyze(req.to_input(), k, req.c, req.sigma_overrides, req.extras, req.assertions);
                    json j = report_to_json(rep, req);
                    j["label"] = fields[0];
                    out << j.dump() << "\n";
                } catch (const std::exception& e) {
                    ++malformed;
                    err << "row " << row_no << " skipped: " << e.what() << "\n";
                }
            }
            if (malformed) err << malformed << " malformed row(s)\n";
            return malformed == 0 ? 0 : 1;
        }
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

}  // namespace heegner
