#include "gdist/pipeline.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>

#include "gdist/distortion.hpp"
#include "gdist/errors.hpp"
#include "gdist/hashing.hpp"
#include "gdist/perfect_norm.hpp"
#include "gdist/wreath_w.hpp"

namespace gdist::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
    std::array<char, 32> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    (void)ec;
    return std::string(buf.data(), end);
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_double(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

void note(std::ostream* log, const std::string& line) {
    if (log) *log << line << '\n' << std::flush;
}

}  // namespace

std::string FamilySpec::ref() const {
    std::string g = genset_name(genset);
    std::replace(g.begin(), g.end(), '-', '_');
    return "sl3_p" + std::to_string(p) + "_l" + std::to_string(level) + "_" + g;
}

std::vector<FamilySpec> parse_family(const std::string& text) {
    std::vector<FamilySpec> out;
    for (const auto& item : split_list(text)) {
        const auto parts = split_list(item, ':');
        if (parts.size() < 2 || parts.size() > 3) throw UsageError("family entry '" + item + "' is not p:level[:genset]");
        FamilySpec f;
        try {
            f.p = static_cast<std::uint32_t>(std::stoul(parts[0]));
            f.level = std::stoi(parts[1]);
        } catch (const std::exception&) {
            throw UsageError("family entry '" + item + "' is not p:level[:genset]");
        }
        if (parts.size() == 3) f.genset = parse_genset(parts[2]);
        sl3_order(f.p, f.level);  // validates p and level
        out.push_back(f);
    }
    if (out.empty()) throw UsageError("empty family");
    return out;
}

Settings Settings::from_config(const Config& c) {
    c.require_known({"pipeline.rho", "pipeline.rounds", "pipeline.family", "pipeline.horizon", "pipeline.t_cap",
                     "global.seed", "global.tol", "global.budget_elements", "global.cache_dir", "global.out",
                     "wreath.factors", "wreath.m", "wreath.measure_radius", "wreath.measure_budget",
                     "wreath.rectifier_length", "wreath.perfect_budget", "perfect.j_budget",
                     "distortion.optimizer_max_n", "distortion.optimizer_iterations", "distortion.exact_profile_max_n",
                     "distortion.profile_sources"});
    Settings s;
    s.rho = c.get("pipeline.rho", s.rho);
    s.rounds = static_cast<int>(c.get_int("pipeline.rounds", s.rounds));
    if (c.has("pipeline.family")) s.family = parse_family(c.get("pipeline.family", ""));
    s.horizon = c.get_double("pipeline.horizon", s.horizon);
    s.t_cap = c.get_double("pipeline.t_cap", s.t_cap);
    s.seed = static_cast<std::uint64_t>(c.get_int("global.seed", static_cast<std::int64_t>(s.seed)));
    s.tol = c.get_double("global.tol", s.tol);
    s.budget = static_cast<std::uint64_t>(c.get_int("global.budget_elements", static_cast<std::int64_t>(s.budget)));
    if (c.has("global.cache_dir")) s.cache_dir = fs::path(c.get("global.cache_dir", ""));
    s.wreath_factors = c.get_list("wreath.factors", s.wreath_factors);
    s.wreath_m = static_cast<int>(c.get_int("wreath.m", s.wreath_m));
    s.measure_radius = static_cast<int>(c.get_int("wreath.measure_radius", s.measure_radius));
    s.measure_budget = static_cast<std::uint64_t>(c.get_int("wreath.measure_budget", static_cast<std::int64_t>(s.measure_budget)));
    s.rectifier_length = static_cast<int>(c.get_int("wreath.rectifier_length", s.rectifier_length));
    s.perfect_budget = static_cast<int>(c.get_int("wreath.perfect_budget", s.perfect_budget));
    s.j_budget = static_cast<int>(c.get_int("perfect.j_budget", s.j_budget));
    s.optimizer_max_n = static_cast<std::uint64_t>(c.get_int("distortion.optimizer_max_n", static_cast<std::int64_t>(s.optimizer_max_n)));
    s.optimizer_iterations = static_cast<int>(c.get_int("distortion.optimizer_iterations", s.optimizer_iterations));
    s.exact_profile_max_n = static_cast<std::uint64_t>(c.get_int("distortion.exact_profile_max_n", static_cast<std::int64_t>(s.exact_profile_max_n)));
    s.profile_sources = static_cast<std::uint64_t>(c.get_int("distortion.profile_sources", static_cast<std::int64_t>(s.profile_sources)));

    if (s.rounds < 0) throw UsageError("pipeline.rounds must be nonnegative");
    if (!(s.horizon > 1)) throw UsageError("pipeline.horizon must exceed 1");
    if (!(s.t_cap >= 1) || s.t_cap > 9e15) throw UsageError("pipeline.t_cap must lie in [1, 9e15]");
    if (!(s.tol > 0)) throw UsageError("global.tol must be positive");
    if (s.wreath_factors.empty()) throw UsageError("wreath.factors is empty");
    if (s.wreath_m < 1 || s.measure_radius < 0 || s.rectifier_length < 0 || s.perfect_budget < 1 || s.j_budget < 1)
        throw UsageError("wreath and perfect budgets must be positive");
    if (s.optimizer_iterations < 1) throw UsageError("distortion.optimizer_iterations must be positive");
    return s;
}

Config Settings::to_config() const {
    Config c;
    c.set("pipeline.rho", rho);
    c.set("pipeline.rounds", std::to_string(rounds));
    std::string fam;
    for (const auto& f : family)
        fam += (fam.empty() ? "" : ",") + std::to_string(f.p) + ":" + std::to_string(f.level) + ":" + genset_name(f.genset);
    c.set("pipeline.family", fam);
    c.set("pipeline.horizon", fmt(horizon));
    c.set("pipeline.t_cap", fmt(t_cap));
    c.set("global.seed", std::to_string(seed));
    c.set("global.tol", fmt(tol));
    c.set("global.budget_elements", std::to_string(budget));
    if (cache_dir) c.set("global.cache_dir", cache_dir->string());
    std::string factors;
    for (const auto& f : wreath_factors) factors += (factors.empty() ? "" : ",") + f;
    c.set("wreath.factors", factors);
    c.set("wreath.m", std::to_string(wreath_m));
    c.set("wreath.measure_radius", std::to_string(measure_radius));
    c.set("wreath.measure_budget", std::to_string(measure_budget));
    c.set("wreath.rectifier_length", std::to_string(rectifier_length));
    c.set("wreath.perfect_budget", std::to_string(perfect_budget));
    c.set("perfect.j_budget", std::to_string(j_budget));
    c.set("distortion.optimizer_max_n", std::to_string(optimizer_max_n));
    c.set("distortion.optimizer_iterations", std::to_string(optimizer_iterations));
    c.set("distortion.exact_profile_max_n", std::to_string(exact_profile_max_n));
    c.set("distortion.profile_sources", std::to_string(profile_sources));
    return c;
}

GroupHandle toy_factor(const std::string& name) {
    if (name == "V4") return direct_product({cyclic_group(2), cyclic_group(2)});
    if (name.size() >= 2 && (name[0] == 'C' || name[0] == 'S')) {
        std::size_t k = 0;
        const auto [end, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), k);
        if (ec == std::errc() && end == name.data() + name.size() && k >= 2) {
            if (name[0] == 'C') return cyclic_group(k);
            if (k <= 5) return symmetric_group(k);
        }
    }
    throw UsageError("unknown wreath factor '" + name + "' (expected C<k>, S<k> with k <= 5, or V4)");
}

std::optional<double> least_exceeding(const RhoExpression& rho, double threshold, double from, double cap) {
    double lo = std::max(1.0, std::ceil(from));
    if (lo > cap) return std::nullopt;
    if (rho(lo) > threshold) return lo;
    double hi = lo;
    do {
        lo = hi;
        hi = std::min(cap, 2 * hi);
        if (rho(hi) > threshold) break;
        if (hi >= cap) return std::nullopt;
    } while (true);
    while (hi - lo > 1) {
        const double mid = std::floor((lo + hi) / 2);
        (rho(mid) > threshold ? hi : lo) = mid;
    }
    return hi;
}

Ledger select_indices(const std::vector<Candidate>& candidates, double M, const RhoExpression& rho, int rounds,
                      const Constants& c, const std::vector<LampRecord>& lamps, double t_cap) {
    if (rounds < 0) throw UsageError("rounds must be nonnegative");
    Ledger L;
    L.requested_rounds = rounds;
    L.M = M;
    double t_prev = 0;
    std::size_t next = 0;  // candidates before this index are used
    for (int i = 1; i <= rounds; ++i) {
        // constants are uniform over candidates, so K_i, L_i, L_{i+1} are known before s(i)
        const double Ki = c.K, Li = c.L, L_next = c.L;
        const double threshold = L_next * M;
        const auto t = least_exceeding(rho, threshold, t_prev + 1, t_cap);
        if (!t) {
            L.complete = false;
            L.limiting = {{"round", i},
                          {"constraint", "t_i"},
                          {"detail", "rho(t) <= L_{i+1} M = " + fmt(threshold) + " for every integer t <= " + fmt(t_cap) +
                                         " (rho(t_cap) = " + fmt(rho(t_cap)) + ")"},
                          {"threshold", threshold}};
            break;
        }
        const double need = *t / Ki;
        std::optional<std::size_t> pick;
        json rejected = json::array();
        for (std::size_t j = next; j < candidates.size(); ++j) {
            const auto& cert = candidates[j].cert;
            const double bound = cert.M_at(need);
            if (cert.diameter >= need && bound <= M) {
                pick = j;
                break;
            }
            rejected.push_back({{"certificate", candidates[j].ref},
                                {"diameter", cert.diameter},
                                {"M_at_need", std::isfinite(bound) ? json(bound) : json(nullptr)}});
        }
        if (!pick) {
            L.complete = false;
            L.limiting = {{"round", i},
                          {"constraint", "s(i)"},
                          {"detail", "t_i = " + fmt(*t) + " needs a certified pair at distance >= t_i / K_i = " + fmt(need) +
                                         " with M(t_i / K_i) <= M = " + fmt(M) + "; no remaining certificate qualifies"},
                          {"t_i", *t},
                          {"rho_t_i", rho(*t)},
                          {"threshold", threshold},
                          {"rejected", rejected}};
            break;
        }
        LedgerRow row;
        row.i = i;
        if (static_cast<std::size_t>(i - 1) < lamps.size()) row.lamp = lamps[static_cast<std::size_t>(i - 1)];
        row.K = Ki;
        row.L = Li;
        row.L_prime = c.L_prime;
        row.t = *t;
        row.s = static_cast<int>(*pick) + 1;
        row.certificate = candidates[*pick].ref;
        row.M = M;
        row.rho_t = rho(*t);
        row.L_next_M = threshold;
        row.far_pair_bound = candidates[*pick].cert.M_at(need);
        bool ok = row.rho_t > threshold && row.far_pair_bound <= M;
        if (i >= 2) {
            row.chain_L_M = Li * M;
            row.chain_rho_prev = rho(t_prev);
            ok = ok && *row.chain_L_M < *row.chain_rho_prev;
        }
        if (!ok) throw GuaranteeViolation("ledger inequalities fail at round " + std::to_string(i));
        row.verified = ok;
        row.track = (i % 2) ? "S" : "S'";
        L.rows.push_back(row);
        t_prev = *t;
        next = *pick + 1;
    }
    return L;
}

json ledger_json(const Ledger& l) {
    json rows = json::array();
    for (const auto& r : l.rows) {
        json lamp = r.lamp ? json{{"eps", r.lamp->eps}, {"m", r.lamp->m}, {"n", r.lamp->n}} : json(nullptr);
        rows.push_back({{"i", r.i},
                        {"lamp", lamp},
                        {"K", r.K},
                        {"L", r.L},
                        {"L_prime", r.L_prime},
                        {"t", r.t},
                        {"s", r.s},
                        {"certificate", r.certificate},
                        {"M", r.M},
                        {"rho_t", r.rho_t},
                        {"L_next_M", r.L_next_M},
                        {"far_pair_bound", r.far_pair_bound},
                        {"chain_L_M", opt_json(r.chain_L_M)},
                        {"chain_rho_prev", opt_json(r.chain_rho_prev)},
                        {"verified", r.verified},
                        {"track", r.track}});
    }
    json S = json::array(), S_prime = json::array();
    for (const auto& r : l.rows) (r.track == "S" ? S : S_prime).push_back(r.s);
    return {{"requested_rounds", l.requested_rounds},
            {"complete", l.complete},
            {"limiting", l.limiting},
            {"rows", rows},
            {"S", S},
            {"S_prime", S_prime},
            {"M", l.M},
            {"M_derivation", l.M_derivation},
            {"rho", l.rho},
            {"constants", l.constants},
            {"wreath_plan", l.wreath_plan},
            {"comparisons", l.comparisons},
            {"choice_rule", l.choice_rule}};
}

Ledger ledger_from_json(const json& j) {
    Ledger l;
    l.requested_rounds = j.at("requested_rounds").get<int>();
    l.complete = j.at("complete").get<bool>();
    l.limiting = j.at("limiting");
    for (const auto& r : j.at("rows")) {
        LedgerRow row;
        row.i = r.at("i").get<int>();
        if (!r.at("lamp").is_null())
            row.lamp = LampRecord{r["lamp"].at("eps").get<double>(), r["lamp"].at("m").get<int>(), r["lamp"].at("n").get<int>()};
        row.K = r.at("K").get<double>();
        row.L = r.at("L").get<double>();
        row.L_prime = r.at("L_prime").get<int>();
        row.t = r.at("t").get<double>();
        row.s = r.at("s").get<int>();
        row.certificate = r.at("certificate").get<std::string>();
        row.M = r.at("M").get<double>();
        row.rho_t = r.at("rho_t").get<double>();
        row.L_next_M = r.at("L_next_M").get<double>();
        row.far_pair_bound = r.at("far_pair_bound").get<double>();
        row.chain_L_M = opt_double(r.at("chain_L_M"));
        row.chain_rho_prev = opt_double(r.at("chain_rho_prev"));
        row.verified = r.at("verified").get<bool>();
        row.track = r.at("track").get<std::string>();
        l.rows.push_back(row);
    }
    l.M = j.at("M").get<double>();
    l.M_derivation = j.at("M_derivation");
    l.rho = j.at("rho");
    l.constants = j.at("constants");
    l.wreath_plan = j.at("wreath_plan");
    l.comparisons = j.at("comparisons");
    l.choice_rule = j.at("choice_rule").get<std::string>();
    return l;
}

namespace {

json provenance(double value, const char* how) { return {{"value", value}, {"provenance", how}}; }

Constants wreath_constants(const Settings& s, int J, json& plan_out, std::vector<LampRecord>& lamps, std::ostream* log) {
    std::vector<wreath::Factor> factors;
    for (const auto& name : s.wreath_factors) factors.push_back(wreath::make_factor(name, toy_factor(name)));
    auto plan = wreath::configure_plan(std::move(factors));
    wreath::place(plan, std::vector<int>(plan.lamp_count(), s.wreath_m));
    for (std::size_t k = 0; k < plan.n.size(); ++k) lamps.push_back({wreath::default_eps(k), plan.m[k], plan.n[k].n});

    std::vector<wreath::PsiData> psis;
    std::vector<wreath::Bilipschitz> meas;
    bool measured = true;
    Constants c;
    c.K_wreath = 0;
    c.L_wreath = 0;
    for (std::size_t f = 0; f < plan.factors.size(); ++f) {
        psis.push_back(wreath::psi_rectifiers(plan, f, s.rectifier_length));
        meas.push_back(wreath::measure_bilipschitz(plan, psis.back(), s.measure_radius, s.measure_budget, s.perfect_budget));
        const auto& m = meas.back();
        if (m.violations > 0) throw GuaranteeViolation("Psi leaves the (1, 2L'+1) envelope on factor " + plan.factors[f].name);
        c.L_prime = std::max(c.L_prime, psis.back().L_prime);
        if (m.partial || m.undetermined > 0) measured = false;
        if (m.K) c.K_wreath = std::max(c.K_wreath, *m.K);
        if (m.L) c.L_wreath = std::max(c.L_wreath, *m.L);
        note(log, "wreath factor " + plan.factors[f].name + ": L' = " + std::to_string(psis.back().L_prime) +
                      ", ball radius " + std::to_string(m.radius) + ", rows " + std::to_string(m.rows.size()));
    }
    if (!measured || c.K_wreath == 0) {
        c.K_wreath = 1;
        c.L_wreath = 2 * c.L_prime + 1;
        c.provenance = "envelope";
    } else {
        c.provenance = "measured";
    }
    c.J = J;
    c.K = c.K_wreath;
    c.L = c.L_wreath * J;
    plan_out = wreath::plan_json(plan, psis, meas);
    return c;
}

std::string profile_csv(const DistortionProfile& p, const RhoExpression& rho) {
    std::string out = "t,rho_phi,rho\n";
    for (std::size_t i = 0; i < p.t.size(); ++i) out += fmt(p.t[i]) + "," + fmt(p.rho[i]) + "," + fmt(rho(p.t[i])) + "\n";
    return out;
}

}  // namespace

RunResult run_pipeline(const Settings& s, std::ostream* log) {
    RunResult r;
    const auto rho = parse_rho(s.rho);
    const auto check = validate_rho(rho, s.horizon);
    r.warnings = check.warnings;
    r.ledger.rho = {{"source", s.rho},
                    {"canonical", rho.to_string()},
                    {"horizon", s.horizon},
                    {"samples", check.samples},
                    {"monotone_on_samples", check.monotone},
                    {"grows_on_samples", check.grows},
                    {"warnings", check.warnings}};
    r.ledger.requested_rounds = s.rounds;
    if (s.rounds == 0) {
        note(log, "rounds = 0: empty ledger");
        return r;
    }

    // certificates, sorted by group order
    auto family = s.family;
    std::stable_sort(family.begin(), family.end(),
                     [](const FamilySpec& a, const FamilySpec& b) { return sl3_order(a.p, a.level) < sl3_order(b.p, b.level); });
    std::vector<SpectralData> spectra;
    std::vector<SL3Instance> instances;
    int J = 1;
    for (const auto& f : family) {
        auto inst = build_sl3(f.p, f.level, f.genset, s.budget, s.cache_dir);
        if (s.cache_dir) {
            const auto path = *s.cache_dir / (cache_key(inst.group, s.budget) + ".cayg");
            std::ifstream in(path, std::ios::binary);
            std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
            r.cache_files.emplace_back(path.filename().string(), sha256_hex(bytes));
        }
        auto spec = spectral_gap(inst.graph, s.tol, s.seed);
        Candidate c{f.ref(), certificate(inst.graph, spec), 0};
        c.cert.p = f.p;
        c.cert.level = f.level;
        c.cert.genset = genset_name(f.genset);
        for (std::size_t g = 0; g < inst.group.generator_count(); ++g) {
            const int v = perfect_norm_search(inst.group, inst.group.generators()[g], s.j_budget);
            if (v == kUnknownNorm)
                throw BudgetExceeded("perfect norm of generator " + inst.group.generator_names()[g] + " of " + c.ref +
                                     " exceeds perfect.j_budget = " + std::to_string(s.j_budget));
            c.J = std::max(c.J, v);
        }
        J = std::max(J, c.J);
        note(log, c.ref + ": n = " + std::to_string(c.cert.n) + ", lambda1 = " + fmt(c.cert.lambda1) +
                      ", diameter = " + std::to_string(c.cert.diameter) + ", J = " + std::to_string(c.J));
        r.candidates.push_back(std::move(c));
        spectra.push_back(std::move(spec));
        instances.push_back(std::move(inst));
    }

    std::vector<SpectralCertificate> certs;
    for (const auto& c : r.candidates) certs.push_back(c.cert);
    const double M = family_constant(certs);
    for (const auto& c : r.candidates) {
        double best = std::numeric_limits<double>::infinity();
        int at = 0;
        for (const auto& row : c.cert.table)
            if (2 * row.t >= c.cert.diameter && row.P_t > 0 && row.M_t < best) best = row.M_t, at = row.t;
        r.ledger.M_derivation.push_back({{"certificate", c.ref}, {"min_M_t_past_half_diameter", best}, {"at_t", at}});
    }

    std::vector<LampRecord> lamps;
    json plan;
    const Constants c = wreath_constants(s, J, plan, lamps, log);

    auto ledger = select_indices(r.candidates, M, rho, s.rounds, c, lamps, s.t_cap);
    ledger.rho = r.ledger.rho;
    ledger.M_derivation = r.ledger.M_derivation;
    ledger.wreath_plan = plan;
    ledger.constants = {{"M", provenance(M, "computed: max over certificates of min M(t), t >= diameter / 2")},
                        {"K", provenance(c.K, c.provenance == "measured" ? "measured" : "envelope")},
                        {"L", provenance(c.L, c.provenance == "measured" ? "measured" : "envelope")},
                        {"K_wreath", provenance(c.K_wreath, c.provenance == "measured" ? "measured" : "envelope")},
                        {"L_wreath", provenance(c.L_wreath, c.provenance == "measured" ? "measured" : "envelope")},
                        {"L_prime", provenance(c.L_prime, "computed")},
                        {"J", provenance(c.J, "computed")},
                        {"rounds", provenance(s.rounds, "configured")},
                        {"t_cap", provenance(s.t_cap, "configured")},
                        {"wreath_m", provenance(s.wreath_m, "configured")}};
    note(log, "M = " + fmt(M) + ", K = " + fmt(c.K) + ", L = " + fmt(c.L) + " (" + c.provenance + ")");

    // profiles of concrete 1-Lipschitz maps against ρ, with Poincaré witnesses
    for (std::size_t k = 0; k < instances.size(); ++k) {
        const auto& g = instances[k].graph;
        const auto& cert = r.candidates[k].cert;
        json emb;
        Embedding phi;
        if (g.n <= s.optimizer_max_n) {
            auto opt = min_distortion_embed(FiniteMetric::from_graph(g), 0, 1e-3, s.optimizer_iterations, s.seed,
                                            cert.lower_bound);
            phi = normalize_lipschitz(g, opt.embedding);
            emb = {{"kind", "optimizer"}, {"D", opt.D}, {"lower_floor", opt.lower}, {"converged", opt.converged},
                   {"dimension", phi.cols()}};
        } else {
            phi = spectral_embedding(g, spectra[k].eigenvector);
            emb = {{"kind", "spectral"}, {"dimension", 1}};
        }
        const bool exact = g.n <= s.exact_profile_max_n;
        const auto profile = graph_profile(g, phi, exact ? 0 : s.profile_sources, s.seed);
        const auto cmp = compare_profiles(profile, [&](double t) { return rho(t); }, profile.t.back());
        json witnesses = json::array();
        for (const auto& row : cert.table) {
            if (row.P_t <= 0) continue;
            const auto w = poincare_witness(g, phi, cert, row.t, s.seed + static_cast<std::uint64_t>(row.t),
                                            g.n <= s.optimizer_max_n);
            witnesses.push_back({{"t", row.t}, {"x", w.x}, {"y", w.y}, {"distance", w.distance},
                                 {"image_distance", w.image_distance}, {"bound", w.bound}});
        }
        const std::string file = r.candidates[k].ref + ".csv";
        r.profiles.emplace_back(file, profile_csv(profile, rho));
        ledger.comparisons.push_back({{"certificate", r.candidates[k].ref},
                                      {"embedding", emb},
                                      {"profile", "profiles/" + file},
                                      {"profile_sampled", profile.sampled},
                                      {"verdict", verdict_name(cmp.verdict)},
                                      {"tail_start", opt_json(cmp.tail_start)},
                                      {"better_at", opt_json(cmp.better_at)},
                                      {"worse_at", opt_json(cmp.worse_at)},
                                      {"horizon", cmp.horizon},
                                      {"finite_horizon", cmp.finite_horizon},
                                      {"poincare_witnesses", witnesses}});
        note(log, r.candidates[k].ref + ": profile " + verdict_name(cmp.verdict) + " than rho up to t = " + fmt(cmp.horizon));
    }

    r.ledger = std::move(ledger);
    r.exit_code = r.ledger.complete ? 0 : 2;
    if (!r.ledger.complete) note(log, "partial ledger: " + r.ledger.limiting.at("detail").get<std::string>());
    return r;
}

void emit_report(const RunResult& r, const Settings& s, const fs::path& out) {
    std::error_code ec;
    for (const char* sub : {"certificates", "profiles"}) {
        fs::create_directories(out / sub, ec);
        if (ec) throw UsageError("cannot create " + (out / sub).string() + ": " + ec.message());
        for (const auto& entry : fs::directory_iterator(out / sub)) {
            const auto ext = entry.path().extension();
            if (entry.is_regular_file() && (ext == ".json" || ext == ".csv")) fs::remove(entry.path());
        }
    }
    std::vector<std::pair<std::string, std::string>> files;  // relative path, bytes
    files.emplace_back("config.snapshot", s.to_config().snapshot());
    for (const auto& c : r.candidates) files.emplace_back("certificates/" + c.ref + ".json", certificate_json(c.cert).dump(2) + "\n");
    files.emplace_back("ledger.json", ledger_json(r.ledger).dump(2) + "\n");
    for (const auto& [name, csv] : r.profiles) files.emplace_back("profiles/" + name, csv);
    std::sort(files.begin(), files.end());

    json manifest_files = json::array();
    for (const auto& [rel, bytes] : files) {
        std::ofstream f(out / rel, std::ios::binary);
        f << bytes;
        if (!f) throw UsageError("cannot write " + (out / rel).string());
        manifest_files.push_back({{"path", rel}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
    }
    json cache = json::array();
    for (const auto& [name, hash] : r.cache_files) cache.push_back({{"file", name}, {"sha256", hash}});
    const json manifest = {{"files", manifest_files}, {"cache", cache}, {"exit_code", r.exit_code},
                           {"warnings", r.warnings}};
    std::ofstream m(out / "manifest.json", std::ios::binary);
    m << manifest.dump(2) << "\n";
    if (!m) throw UsageError("cannot write " + (out / "manifest.json").string());
}

}  // namespace gdist::pipeline
