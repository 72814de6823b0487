#ifndef HEEGNER_REPORT_JSON_HPP
#define HEEGNER_REPORT_JSON_HPP

#include <cstdint>
#include <map>
#include <string>

#include <json.hpp>

#include "heegner/engine.hpp"
#include "heegner/padic_oracle.hpp"

namespace heegner {

inline constexpr const char* schema_version = "1";

// Normalized machine-readable analysis request. Serializing a request and
// ingesting the result again is the identity, which makes report echoes
// replayable.
struct AnalyzeRequest {
    std::vector<std::pair<std::int64_t, unsigned>> n_factored;
    std::int64_t disc = 0;
    std::int64_t c = 1;
    AnalysisMode mode = AnalysisMode::EllipticFixedConductor;
    bool primitive = true;
    bool two_minimal = true;
    std::map<std::int64_t, LocalRepType> reps;
    std::map<std::int64_t, bool> sigma_overrides;
    std::map<std::int64_t, EpsilonExtras> extras;
    Assertions assertions;

    CurveInput to_input() const;
};

nlohmann::json request_to_json(const AnalyzeRequest& req);
// Strict parser: unknown fields are rejected.
AnalyzeRequest request_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const HeegnerReport& rep, const AnalyzeRequest& req);
nlohmann::json verdict_to_json(const EmbeddingVerdict& v);
nlohmann::json verify_report_to_json(const oracle::VerifyReport& rep);

LocalQuadExt class_from_name(const std::string& name, std::int64_t p);
std::string rep_kind_name(RepKind k);
nlohmann::json rep_to_json(const LocalRepType& rep);
LocalRepType rep_from_json(std::int64_t p, const nlohmann::json& j);

// Trial-division factorization for CLI inputs (n <= 10^12).
std::vector<std::pair<std::int64_t, unsigned>> factor_small(std::int64_t n);

}  // namespace heegner

#endif
