#pragma once

/**
 * Greedy index selection for the compression construction, run on a finite desk family.
 *
 * Round i picks t_i minimal with ρ(t_i) > L_{i+1} M, then s(i) minimal with a
 * certified far pair: diameter(H_s) >= t_i / K_i and M(t_i / K_i) <= M. Rows
 * alternate between the tracks S and S'. For i >= 2 each row records the chain
 *   ρ_Φ(t) <= ρ_Φ(t_i) <= L_i M < ρ(t_{i-1}) <= ρ(t).
 */

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdist/config.hpp"
#include "gdist/expander.hpp"
#include "gdist/rho.hpp"

namespace gdist::pipeline {

struct FamilySpec {
    std::uint32_t p = 2;
    int level = 1;
    GenSet genset = GenSet::small;

    std::string ref() const;  // "sl3_p2_l1_small"
};

/// "2:1,3:1:small,2:2:paper-large"; the generating set defaults to small.
std::vector<FamilySpec> parse_family(const std::string& text);

struct Settings {
    std::string rho = "log(1+t)";
    int rounds = 2;
    std::vector<FamilySpec> family = {{2, 1}, {3, 1}, {2, 2}};
    double horizon = 1000;  // sampled validation of ρ on [1, horizon]
    double t_cap = 1e15;    // largest t_i searched

    std::uint64_t seed = 1;
    double tol = 1e-9;
    std::uint64_t budget = 60'000;
    std::optional<std::filesystem::path> cache_dir;

    std::vector<std::string> wreath_factors = {"S3"};
    int wreath_m = 2;
    int measure_radius = 8;
    std::uint64_t measure_budget = 3'000'000;
    int rectifier_length = 24;
    int perfect_budget = 16;
    int j_budget = 12;

    std::uint64_t optimizer_max_n = 200;
    int optimizer_iterations = 200;
    std::uint64_t exact_profile_max_n = 6000;
    std::uint64_t profile_sources = 64;

    /// Keys: pipeline.*, global.*, wreath.*, perfect.j_budget, distortion.*. Unknown keys are rejected.
    static Settings from_config(const Config& c);
    Config to_config() const;
};

/// Toy lamp factors by name: C<k>, S<k> (k <= 5), V4.
GroupHandle toy_factor(const std::string& name);

struct Candidate {
    std::string ref;
    SpectralCertificate cert;
    int J = 0;  // max perfect norm of a generator
};

struct Constants {
    double K = 1;  // d_W >= d_T / K on the imbedded copies
    double L = 1;  // d_W <= L d_T
    double K_wreath = 1, L_wreath = 1;
    int L_prime = 0;
    int J = 1;
    std::string provenance;  // "measured" or "envelope"
};

struct LampRecord {
    double eps = 0;
    int m = 0;
    int n = 0;
};

struct LedgerRow {
    int i = 0;
    std::optional<LampRecord> lamp;
    double K = 1, L = 1;
    int L_prime = 0;
    double t = 0;
    int s = 0;  // 1-based index into the family sorted by order
    std::string certificate;
    double M = 0;
    double rho_t = 0;
    double L_next_M = 0;        // L_{i+1} M, which ρ(t_i) must exceed
    double far_pair_bound = 0;  // M(t_i / K_i) of H_{s(i)}
    std::optional<double> chain_L_M, chain_rho_prev;  // L_i M < ρ(t_{i-1}), from i = 2 on
    bool verified = false;
    std::string track;  // "S" or "S'"
};

struct Ledger {
    int requested_rounds = 0;
    std::vector<LedgerRow> rows;
    bool complete = true;
    nlohmann::json limiting;  // {round, constraint, detail} when incomplete
    double M = 0;
    nlohmann::json M_derivation = nlohmann::json::array();
    nlohmann::json rho = nlohmann::json::object();
    nlohmann::json constants = nlohmann::json::object();
    nlohmann::json wreath_plan = nlohmann::json::object();
    nlohmann::json comparisons = nlohmann::json::array();
    std::string choice_rule = "least admissible s; least integer t";
};

/// Pure selection over certificates sorted by order. Constants are uniform over candidates.
Ledger select_indices(const std::vector<Candidate>& candidates, double M, const RhoExpression& rho, int rounds,
                      const Constants& constants, const std::vector<LampRecord>& lamps, double t_cap);

/// Least integer t >= from with ρ(t) > threshold, assuming ρ nondecreasing; nullopt past `cap`.
std::optional<double> least_exceeding(const RhoExpression& rho, double threshold, double from, double cap);

nlohmann::json ledger_json(const Ledger& l);
Ledger ledger_from_json(const nlohmann::json& j);

struct RunResult {
    Ledger ledger;
    std::vector<Candidate> candidates;
    std::vector<std::pair<std::string, std::string>> profiles;  // file name, CSV text
    std::vector<std::pair<std::string, std::string>> cache_files;  // path, sha256
    std::vector<std::string> warnings;
    int exit_code = 0;  // 0 complete, 2 partial
};

RunResult run_pipeline(const Settings& s, std::ostream* log = nullptr);

/// Writes config.snapshot, certificates/*.json, ledger.json, profiles/*.csv and manifest.json.
/// Byte-deterministic for identical inputs.
void emit_report(const RunResult& r, const Settings& s, const std::filesystem::path& out);

}  // namespace gdist::pipeline
