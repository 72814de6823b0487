#include "heegner/report_json.hpp"

#include <set>
#include <stdexcept>

namespace heegner {

using nlohmann::json;

CurveInput AnalyzeRequest::to_input() const {
    CurveInput input;
    input.n_factored = n_factored;
    input.reps = reps;
    input.primitive = primitive;
    input.two_minimal = two_minimal;
    input.mode = mode;
    return input;
}

std::string rep_kind_name(RepKind k) {
    switch (k) {
        case RepKind::PrincipalSeries: return "principal-series";
        case RepKind::Steinberg: return "steinberg";
        case RepKind::Supercuspidal: return "supercuspidal";
    }
    return "?";
}

LocalQuadExt class_from_name(const std::string& name, std::int64_t p) {
    if (name == "unram" || name == "unramified") return LocalQuadExt::Unramified;
    if (name == "ram" || name == "ramified") {
        if (p == 2)
            throw std::invalid_argument("class 'ram' is ambiguous at p=2; name the field (sqrt3 .. sqrt14)");
        return LocalQuadExt::RamifiedPrime;
    }
    if (name == "ram-unit") return LocalQuadExt::RamifiedUnit;
    if (name == "ram-prime") return LocalQuadExt::RamifiedPrime;
    if (name == "sqrt3") return LocalQuadExt::Sqrt3;
    if (name == "sqrt7") return LocalQuadExt::Sqrt7;
    if (name == "sqrt2") return LocalQuadExt::Sqrt2;
    if (name == "sqrt6") return LocalQuadExt::Sqrt6;
    if (name == "sqrt10") return LocalQuadExt::Sqrt10;
    if (name == "sqrt14") return LocalQuadExt::Sqrt14;
    throw std::invalid_argument("unknown quadratic extension class: " + name);
}

json rep_to_json(const LocalRepType& rep) {
    json j;
    j["kind"] = rep_kind_name(rep.kind);
    j["n"] = rep.n;
    switch (rep.kind) {
        case RepKind::Steinberg: j["twist_conductor"] = rep.steinberg_twist; break;
        case RepKind::Supercuspidal:
            if (rep.exceptional) {
                j["exceptional"] = true;
            } else {
                j["inducing"] = class_name(rep.inducing);
                j["psi_conductor"] = rep.psi_conductor;
            }
            j["minimal"] = rep.minimal;
            break;
        default: break;
    }
    return j;
}

LocalRepType rep_from_json(std::int64_t p, const json& j) {
    static const std::set<std::string> allowed = {"kind", "n", "twist_conductor", "inducing",
                                                  "psi_conductor", "minimal", "exceptional"};
    for (auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) throw std::invalid_argument("unknown field in local type: " + key);
    }
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "principal-series") return LocalRepType::principal_series(j.value("n", 0u));
    if (kind == "steinberg") {
        LocalRepType r = LocalRepType::steinberg(p, j.value("twist_conductor", 0u));
        if (j.contains("n") && j.at("n").get<unsigned>() != r.n)
            throw std::invalid_argument("steinberg: n inconsistent with twist conductor");
        return r;
    }
    if (kind == "supercuspidal") {
        if (j.value("exceptional", false)) {
            LocalRepType r = LocalRepType::exceptional_supercuspidal();
            r.minimal = j.value("minimal", true);
            validate_rep(p, r);
            return r;
        }
        LocalRepType r = LocalRepType::supercuspidal(p, class_from_name(j.at("inducing").get<std::string>(), p),
                                                     j.at("psi_conductor").get<unsigned>(),
                                                     j.value("minimal", true));
        if (j.contains("n") && j.at("n").get<unsigned>() != r.n)
            throw std::invalid_argument("supercuspidal: n inconsistent with inducing data");
        return r;
    }
    throw std::invalid_argument("unknown local type kind: " + kind);
}

namespace {

json factored_to_json(const std::vector<std::pair<std::int64_t, unsigned>>& f) {
    json arr = json::array();
    for (auto& [p, e] : f) arr.push_back(json::array({p, e}));
    return arr;
}

std::vector<std::pair<std::int64_t, unsigned>> factored_from_json(const json& j) {
    std::vector<std::pair<std::int64_t, unsigned>> f;
    if (j.is_number_integer()) return factor_small(j.get<std::int64_t>());
    for (auto& entry : j) {
        if (!entry.is_array() || entry.size() != 2)
            throw std::invalid_argument("N must be an integer or a list of [prime, exponent] pairs");
        f.emplace_back(entry[0].get<std::int64_t>(), entry[1].get<unsigned>());
    }
    return f;
}

std::string sign_to_string(const SignValue& s) {
    if (!s.determined()) return "undetermined";
    return s.value > 0 ? "+1" : "-1";
}

json order_type_to_json(const OrderType& t) {
    json j;
    j["eichler"] = json::array();
    for (auto& [p, e] : t.eichler) j["eichler"].push_back(json::array({p, e}));
    j["cartan"] = json::array();
    for (auto& [p, e] : t.cartan) j["cartan"].push_back(json::array({p, e}));
    j["division"] = json::array();
    for (auto& [p, d] : t.division)
        j["division"].push_back(json{{"p", p}, {"class", class_name(d.l_class)}, {"nu", d.nu}});
    j["level"] = t.level();
    j["delta"] = t.delta();
    return j;
}

const char* status_name(CheckStatus s) {
    switch (s) {
        case CheckStatus::Pass: return "pass";
        case CheckStatus::Fail: return "fail";
        case CheckStatus::NotApplicable: return "not-applicable";
    }
    return "?";
}

}  // namespace

std::vector<std::pair<std::int64_t, unsigned>> factor_small(std::int64_t n) {
    if (n < 2) throw std::invalid_argument("factor_small: need n >= 2");
    if (n > 1'000'000'000'000ll) throw std::invalid_argument("factor_small: n exceeds 10^12");
    std::vector<std::pair<std::int64_t, unsigned>> f;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p != 0) continue;
        unsigned e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1u);
    return f;
}

json request_to_json(const AnalyzeRequest& req) {
    json j;
    j["schema_version"] = schema_version;
    j["N"] = factored_to_json(req.n_factored);
    j["disc"] = req.disc;
    j["c"] = req.c;
    j["mode"] = req.mode == AnalysisMode::EllipticFixedConductor ? "elliptic" : "abelian";
    j["primitive"] = req.primitive;
    j["two_minimal"] = req.two_minimal;
    json reps = json::object();
    for (auto& [p, rep] : req.reps) reps[std::to_string(p)] = rep_to_json(rep);
    j["reps"] = reps;
    json ov = json::object();
    for (auto& [p, b] : req.sigma_overrides) ov[std::to_string(p)] = b;
    j["sigma_overrides"] = ov;
    json ex = json::object();
    for (auto& [p, e] : req.extras) {
        json je = json::object();
        if (e.steinberg_norm_relation) je["steinberg_norm_relation"] = *e.steinberg_norm_relation;
        ex[std::to_string(p)] = je;
    }
    j["extras"] = ex;
    j["assertions"] = {{"l_prime_nonzero", req.assertions.l_prime_nonzero}, {"no_cm", req.assertions.no_cm}};
    return j;
}

AnalyzeRequest request_from_json(const json& j) {
    static const std::set<std::string> allowed = {"schema_version", "N",     "disc",        "c",
                                                  "mode",           "reps",  "sigma",       "sigma_overrides",
                                                  "extras",         "primitive", "two_minimal", "assertions"};
    for (auto& [key, value] : j.items()) {
        (void)value;
        if (!allowed.count(key)) throw std::invalid_argument("unknown request field: " + key);
    }
    if (j.contains("schema_version") && j.at("schema_version").get<std::string>() != schema_version)
        throw std::invalid_argument("unsupported schema_version");
    AnalyzeRequest req;
    req.n_factored = factored_from_json(j.at("N"));
    req.disc = j.at("disc").get<std::int64_t>();
    req.c = j.value("c", (std::int64_t)1);
    std::string mode = j.value("mode", std::string("elliptic"));
    if (mode == "elliptic")
        req.mode = AnalysisMode::EllipticFixedConductor;
    else if (mode == "abelian")
        req.mode = AnalysisMode::AbelianAdjustable;
    else
        throw std::invalid_argument("mode must be 'elliptic' or 'abelian'");
    req.primitive = j.value("primitive", true);
    req.two_minimal = j.value("two_minimal", true);
    if (j.contains("reps"))
        for (auto& [key, value] : j.at("reps").items())
            req.reps[std::stoll(key)] = rep_from_json(std::stoll(key), value);
    for (auto& [p, e] : req.n_factored)
        if (!req.reps.count(p)) req.reps[p] = default_rep_type(p, e);
    if (j.contains("sigma")) {
        // a plain list pins the finite part of Sigma exactly
        std::set<std::int64_t> members;
        for (auto& v : j.at("sigma")) members.insert(v.get<std::int64_t>());
        for (auto& [p, e] : req.n_factored) {
            (void)e;
            req.sigma_overrides[p] = members.count(p) > 0;
        }
        for (auto p : members) {
            bool divides = false;
            for (auto& [q, e] : req.n_factored) {
                (void)e;
                divides |= q == p;
            }
            if (!divides)
                throw std::invalid_argument("sigma member " + std::to_string(p) + " does not divide N");
        }
    }
    if (j.contains("sigma_overrides"))
        for (auto& [key, value] : j.at("sigma_overrides").items())
            req.sigma_overrides[std::stoll(key)] = value.get<bool>();
    if (j.contains("extras"))
        for (auto& [key, value] : j.at("extras").items()) {
            EpsilonExtras e;
            for (auto& [fk, fv] : value.items()) {
                if (fk == "steinberg_norm_relation")
                    e.steinberg_norm_relation = fv.get<bool>();
                else
                    throw std::invalid_argument("unknown extras field: " + fk);
            }
            req.extras[std::stoll(key)] = e;
        }
    if (j.contains("assertions")) {
        auto& a = j.at("assertions");
        req.assertions.l_prime_nonzero = a.value("l_prime_nonzero", false);
        req.assertions.no_cm = a.value("no_cm", false);
    }
    return req;
}

json report_to_json(const HeegnerReport& rep, const AnalyzeRequest& req) {
    json j;
    j["schema_version"] = schema_version;
    j["request"] = request_to_json(req);
    j["status"] = rep.status == AnalysisStatus::Ok ? "ok" : "blocked";
    if (rep.status == AnalysisStatus::Blocked) {
        j["blocked_reason"] = rep.blocked_reason;
    }
    json sigma;
    sigma["includes_infinity"] = rep.sigma.includes_infinity;
    sigma["primes"] = json::array();
    for (auto& e : rep.sigma.primes) {
        json je{{"p", e.p}, {"epsilon", sign_to_string(e.epsilon)}, {"eta_minus_one", e.eta}, {"rule", e.rule}};
        if (e.in_sigma)
            je["in_sigma"] = *e.in_sigma;
        else
            je["in_sigma"] = "undetermined";
        if (!e.epsilon.determined()) je["epsilon_reason"] = e.epsilon.reason;
        sigma["primes"].push_back(je);
    }
    if (rep.sigma.global_sign) sigma["global_sign"] = *rep.sigma.global_sign;
    if (rep.sigma.delta) sigma["delta"] = *rep.sigma.delta;
    j["sigma"] = sigma;
    if (rep.status == AnalysisStatus::Blocked) return j;

    j["minimal_order"] = order_type_to_json(rep.minimal_order);
    j["order_type"] = order_type_to_json(rep.order_type);
    j["level"] = rep.level;
    j["c"] = rep.conductor;
    j["c_prime"] = rep.c_prime;
    j["exists"] = rep.exists;
    j["adjustments"] = json::array();
    for (auto& a : rep.adjustments) {
        json ja{{"p", a.p},       {"part", std::string(1, a.part)}, {"m", a.m},       {"m_prime", a.m_prime},
                {"n", a.n},       {"n_prime", a.n_prime},           {"rule", a.rule_id}, {"passed", a.passed}};
        if (a.part == 'D') {
            ja["class"] = class_name(a.l_class);
            json alts = json::array();
            for (auto c : a.l_alternatives) alts.push_back(class_name(c));
            ja["alternatives"] = alts;
        }
        j["adjustments"].push_back(ja);
    }
    if (rep.heegner_points) j["heegner_points"] = *rep.heegner_points;
    if (rep.embedding_count) j["embedding_count"] = *rep.embedding_count;
    if (rep.components) {
        json c;
        c["primes"] = rep.components->primes;
        c["order_class_number"] = rep.components->class_number;
        c["component_fields"] = rep.components->field_disc_parts;
        j["components"] = c;
    } else {
        j["components"] = "undetermined";
    }
    j["rationality_field"] = rep.rationality_field;
    json checks = json::array();
    for (auto& c : rep.assumption_2n.conditions)
        checks.push_back(json{{"status", status_name(c.status)}, {"detail", c.detail}});
    j["assumption_2n"] = {{"conditions", checks}, {"all_pass", rep.assumption_2n.all_pass()}};
    j["missing_cases"] = {{"three_inert_val4", rep.missing_cases.three_inert_val4},
                          {"two_ramified", rep.missing_cases.two_ramified}};
    j["uniformization"] = rep.uniformization;
    j["conclusion"] = rep.conclusion;
    j["warnings"] = rep.warnings;
    j["diagnostics"] = rep.diagnostics;
    return j;
}

json verdict_to_json(const EmbeddingVerdict& v) {
    json j;
    j["exists"] = v.exists;
    if (v.count) j["count"] = *v.count;
    j["rule"] = v.rule_id;
    return j;
}

json verify_report_to_json(const oracle::VerifyReport& rep) {
    json j;
    j["all_match"] = rep.all_match;
    j["mismatches"] = rep.mismatches;
    j["skipped"] = rep.skipped;
    j["cells"] = json::array();
    for (auto& c : rep.cells) {
        json jc;
        jc["p"] = c.p;
        jc["m"] = c.m;
        jc["n"] = c.n;
        jc["precision"] = c.precision;
        jc["K"] = c.k_class ? class_name(*c.k_class) : "split";
        if (c.kind == oracle::ModelKind::Division) jc["L"] = class_name(c.l_class);
        jc["rule"] = c.rule_id;
        if (c.skipped) {
            jc["skipped"] = true;
        } else {
            jc["table_exists"] = c.table_exists;
            jc["oracle_exists"] = c.oracle_exists;
            if (c.table_count) jc["table_count"] = *c.table_count;
            if (c.oracle_count) jc["oracle_count"] = *c.oracle_count;
            jc["match"] = c.match;
        }
        j["cells"].push_back(jc);
    }
    return j;
}

}  // namespace heegner
