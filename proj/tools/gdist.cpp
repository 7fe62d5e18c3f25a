// gdist: command-line front end over the library modules.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdist/cayley.hpp"
#include "gdist/config.hpp"
#include "gdist/derived_imbed.hpp"
#include "gdist/distortion.hpp"
#include "gdist/errors.hpp"
#include "gdist/expander.hpp"
#include "gdist/grigorchuk.hpp"
#include "gdist/perfect_norm.hpp"
#include "gdist/pipeline.hpp"
#include "gdist/rho.hpp"
#include "gdist/wreath_w.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace gdist;

namespace {

constexpr int kExitPartial = 2;
constexpr int kExitUsage = 3;
constexpr int kExitInternal = 4;

struct Globals {
    std::string config_file;
    std::uint64_t seed = 1;
    std::string cache_dir;
    std::uint64_t budget = 60'000;
    double tol = 1e-9;
    std::string out;
    CLI::Option *seed_opt = nullptr, *cache_opt = nullptr, *budget_opt = nullptr, *tol_opt = nullptr, *out_opt = nullptr;

    Config config;

    /// Config file first, then explicit flags on top.
    void resolve() {
        if (!config_file.empty()) config = Config::load(config_file);
        if (seed_opt->count()) config.set("global.seed", std::to_string(seed));
        if (cache_opt->count()) config.set("global.cache_dir", cache_dir);
        if (budget_opt->count()) config.set("global.budget_elements", std::to_string(budget));
        if (tol_opt->count()) {
            std::ostringstream s;
            s.precision(17);
            s << tol;
            config.set("global.tol", s.str());
        }
        if (out_opt->count()) config.set("global.out", out);
        auto s = pipeline::Settings::from_config(config);  // rejects unknown keys
        seed = s.seed;
        budget = s.budget;
        tol = s.tol;
        cache_dir = s.cache_dir ? s.cache_dir->string() : "";
        out = config.get("global.out", "");
    }

    std::optional<fs::path> cache() const {
        return cache_dir.empty() ? std::nullopt : std::optional<fs::path>(cache_dir);
    }
};

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    const fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw UsageError("cannot write " + p.string());
    f << text;
}

std::uint64_t to_uint(const std::string& s, const std::string& what) {
    std::uint64_t v = 0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || end != s.data() + s.size()) throw UsageError(what + ": '" + s + "' is not an integer");
    return v;
}

std::vector<int> int_list(const std::string& text, const std::string& what) {
    std::vector<int> out;
    for (const auto& item : split_list(text)) out.push_back(static_cast<int>(to_uint(item, what)));
    return out;
}

/// Group specs: sl3:<p>:<level>[:small|paper-large], C<k>, S<k>, V4.
struct Resolved {
    std::optional<GroupHandle> group;
    std::optional<pipeline::FamilySpec> sl3;
    CayleyGraph graph;
};

std::optional<pipeline::FamilySpec> sl3_spec(const std::string& spec) {
    if (spec.rfind("sl3:", 0) != 0) return std::nullopt;
    auto parts = split_list(spec.substr(4), ':');
    if (parts.size() < 2 || parts.size() > 3) throw UsageError("expected sl3:<p>:<level>[:<genset>], got '" + spec + "'");
    pipeline::FamilySpec f;
    f.p = static_cast<std::uint32_t>(to_uint(parts[0], "p"));
    f.level = static_cast<int>(to_uint(parts[1], "level"));
    if (parts.size() == 3) f.genset = parse_genset(parts[2]);
    return f;
}

GroupHandle resolve_group(const std::string& spec) {
    if (auto f = sl3_spec(spec)) return sl3_group(f->p, f->level, f->genset);
    return pipeline::toy_factor(spec);
}

/// Graph specs additionally accept cycle:<n>, complete:<n>, path:<n> and cayg:<file>.
Resolved resolve(const std::string& spec, const Globals& g) {
    Resolved r;
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    if (colon != std::string::npos && (kind == "cycle" || kind == "complete" || kind == "path")) {
        const auto n = to_uint(spec.substr(colon + 1), kind);
        if (n < 2) throw UsageError(kind + " graphs need at least 2 vertices");
        std::vector<std::pair<std::uint64_t, std::uint64_t>> edges;
        if (kind == "complete") {
            for (std::uint64_t i = 0; i < n; ++i)
                for (std::uint64_t j = i + 1; j < n; ++j) edges.emplace_back(i, j);
        } else {
            for (std::uint64_t i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
            if (kind == "cycle" && n > 2) edges.emplace_back(n - 1, 0);
        }
        r.graph = graph_from_edges(n, edges);
        return r;
    }
    if (kind == "cayg" && colon != std::string::npos) {
        r.graph = read_graph_cache(spec.substr(colon + 1));
        return r;
    }
    if ((r.sl3 = sl3_spec(spec))) {
        auto inst = build_sl3(r.sl3->p, r.sl3->level, r.sl3->genset, g.budget, g.cache());
        r.group = inst.group;
        r.graph = std::move(inst.graph);
        return r;
    }
    r.group = pipeline::toy_factor(spec);
    r.graph = g.cache() ? load_or_build(*r.group, g.budget, *g.cache()) : bfs_closure(*r.group, g.budget);
    return r;
}

const GroupHandle& need_group(const Resolved& r, const std::string& spec) {
    if (!r.group) throw UsageError("'" + spec + "' is a plain graph; this command needs a group");
    return *r.group;
}

std::vector<wreath::Factor> make_factors(const std::string& names) {
    std::vector<wreath::Factor> out;
    for (const auto& n : split_list(names)) out.push_back(wreath::make_factor(n, resolve_group(n)));
    return out;
}

wreath::PlacementPlan make_plan(const std::string& factors, const std::string& radii, const std::string& positions) {
    auto plan = wreath::configure_plan(make_factors(factors));
    auto m = int_list(radii, "m");
    if (m.size() == 1) m.assign(plan.lamp_count(), m[0]);
    wreath::place(plan, m);
    if (!positions.empty()) {  // manual override, for negative controls
        const auto n = int_list(positions, "positions");
        if (n.size() != plan.n.size()) throw UsageError("--positions needs one index per lamp");
        for (std::size_t k = 0; k < n.size(); ++k) plan.n[k].n = n[k];
    }
    return plan;
}

Embedding load_embedding(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read embedding " + path);
    return read_embedding(in);
}

FiniteMetric load_metric(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read metric " + path);
    return read_metric(in);
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distortion of expander and wreath constructions at desk scale"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--config", g.config_file, "flat key = value file, keys namespaced by module")->check(CLI::ExistingFile);
    g.seed_opt = app.add_option("--seed", g.seed, "RNG seed");
    g.cache_opt = app.add_option("--cache-dir", g.cache_dir, "directory for CAYG graph caches");
    g.budget_opt = app.add_option("--budget-elements", g.budget, "largest group closure");
    g.tol_opt = app.add_option("--tol", g.tol, "numerical tolerance");
    g.out_opt = app.add_option("--out", g.out, "output file or directory");

    std::function<int()> action;
    auto bind = [&](CLI::App* sub, std::function<int()> fn) { sub->callback([&action, fn] { action = fn; }); };

    // group / cayley
    std::string group_spec;
    auto* group = app.add_subcommand("group", "finite groups");
    group->require_subcommand(1);
    auto* group_build = group->add_subcommand("build", "BFS closure, optionally saved as a CAYG cache (--out)");
    group_build->add_option("--group", group_spec, "sl3:<p>:<level>[:genset], C<k>, S<k>, V4")->required();
    bind(group_build, [&] {
        auto r = resolve(group_spec, g);
        json j = {{"group", group_spec}, {"order", r.graph.n}, {"generators", r.graph.gen_count}};
        if (r.sl3) {
            const auto oracle = sl3_order(r.sl3->p, r.sl3->level);
            j["order_formula"] = oracle;
            if (oracle != r.graph.n) throw GuaranteeViolation("closure order differs from the order formula");
        }
        if (!g.out.empty()) {
            write_graph_cache(r.graph, g.out);
            j["cache"] = g.out;
        }
        std::cout << json_text(j);
        return 0;
    });

    int stats_radius = -1;
    auto* cayley = app.add_subcommand("cayley", "Cayley graph metrics");
    cayley->require_subcommand(1);
    auto* cayley_stats = cayley->add_subcommand("stats", "diameter, growth and distance distribution");
    cayley_stats->add_option("--group", group_spec, "group or graph spec")->required();
    cayley_stats->add_option("--radius", stats_radius, "growth radius (default: diameter)");
    bind(cayley_stats, [&] {
        auto r = resolve(group_spec, g);
        const bool connected = is_connected(r.graph);
        json j = {{"group", group_spec}, {"n", r.graph.n}, {"degree", r.graph.degree}, {"connected", connected}};
        if (connected) {
            const int diam = diameter(r.graph);
            j["diameter"] = diam;
            j["growth"] = growth_function(r.graph, stats_radius < 0 ? diam : stats_radius).ball;
            j["distance_distribution"] = distance_distribution(r.graph);
        }
        emit(json_text(j), g.out);
        return 0;
    });

    // spectral
    auto* spectral = app.add_subcommand("spectral", "spectral gap and certificate JSON");
    spectral->add_option("--group", group_spec, "group or graph spec")->required();
    bind(spectral, [&] {
        auto r = resolve(group_spec, g);
        auto cert = certificate(r.graph, g.tol, g.seed);
        if (r.sl3) {
            cert.p = r.sl3->p;
            cert.level = r.sl3->level;
            cert.genset = genset_name(r.sl3->genset);
        }
        emit(json_text(certificate_json(cert)), g.out);
        return 0;
    });

    // perfect-norm
    int norm_budget = 16;
    auto* perfect = app.add_subcommand("perfect-norm", "balanced-word norm table as CSV, J on stderr");
    perfect->add_option("--group", group_spec, "group spec")->required();
    perfect->add_option("--norm-budget", norm_budget, "longest balanced word considered");
    bind(perfect, [&] {
        auto r = resolve(group_spec, g);
        need_group(r, group_spec);
        auto table = perfect_norm_table(r.graph, norm_budget);
        std::ostringstream csv;
        write_perfect_norm_csv(csv, r.graph, table);
        emit(csv.str(), g.out);
        std::size_t known = 0;
        for (int v : table.norm) known += v != kUnknownNorm;
        json j = {{"group", group_spec}, {"n", r.graph.n}, {"known", known}, {"states", table.states}};
        try {
            j["J"] = balanced_generator_cost(r.graph, table);
        } catch (const BudgetExceeded&) {
            j["J"] = nullptr;
        }
        std::cerr << j.dump() << "\n";
        return 0;
    });

    // imbed-derived
    auto* imbed = app.add_subcommand("imbed-derived", "imbed G into [H,H] with H in Q wr C_2m; --out is a directory");
    imbed->add_option("--group", group_spec, "small group spec (C<k>, S<k>, V4)")->required();
    bind(imbed, [&] {
        auto r = resolve(group_spec, g);
        const auto& grp = need_group(r, group_spec);
        QuotientSearch qs;
        qs.seed = g.seed;
        auto q = find_ball_faithful_quotient(grp, r.graph, static_cast<int>(r.graph.n), qs);
        auto host = build_wreath_host(grp, r.graph, q, g.budget);
        auto rep = verify_sandwich(grp, r.graph, host);
        const auto summary = json_text(sandwich_summary(r.graph, q, host, rep));
        if (g.out.empty()) {
            std::cout << summary;
        } else {
            fs::create_directories(g.out);
            emit(summary, (fs::path(g.out) / "summary.json").string());
            std::ostringstream csv;
            write_sandwich_csv(csv, r.graph, rep);
            emit(csv.str(), (fs::path(g.out) / "sandwich.csv").string());
        }
        if (rep.lower_violations > 0) std::cerr << "lower bound flagged on " << rep.lower_violations << " elements\n";
        return 0;
    });

    // grig
    int radius = 4, cap = 64, index = 0;
    std::string ray;
    auto* grig = app.add_subcommand("grig", "Grigorchuk group");
    grig->require_subcommand(1);
    auto* schreier = grig->add_subcommand("schreier", "Schreier ball as a DOT edge list");
    schreier->add_option("--radius", radius)->check(CLI::NonNegativeNumber);
    auto* index_opt = schreier->add_option("--index", index, "base point x_i = 0^i 1^inf")->check(CLI::NonNegativeNumber);
    schreier->add_option("--ray", ray, "base point u 1^inf given by u over 01")->excludes(index_opt);
    bind(schreier, [&] {
        const auto base = ray.empty() ? grig::ray_x(index) : grig::canonical_ray(ray);
        std::ostringstream dot;
        grig::write_schreier_dot(dot, grig::schreier_ball(base, radius));
        emit(dot.str(), g.out);
        return 0;
    });
    auto* growth = grig->add_subcommand("growth", "ball sizes as CSV r,ball");
    growth->add_option("--radius", radius)->check(CLI::NonNegativeNumber);
    bind(growth, [&] {
        const auto gf = grig::grig_growth(radius, g.budget);
        std::string csv = "r,ball\n";
        for (std::size_t r = 0; r < gf.ball.size(); ++r) csv += std::to_string(r) + "," + std::to_string(gf.ball[r]) + "\n";
        emit(csv, g.out);
        return 0;
    });
    auto* props = grig->add_subcommand("props", "spreading and stabilizing witnesses N(R) for R = 1..radius");
    props->add_option("--radius", radius)->check(CLI::PositiveNumber);
    props->add_option("--cap", cap, "largest index examined")->check(CLI::PositiveNumber);
    bind(props, [&] {
        json rows = json::array();
        bool all = true;
        for (int R = 1; R <= radius; ++R) {
            const auto p = grig::check_sequence_properties(R, cap);
            all = all && p.spreading && p.stabilizing;
            rows.push_back({{"R", R},
                            {"cap", cap},
                            {"spreading", p.spreading ? json(*p.spreading) : json(nullptr)},
                            {"stabilizing", p.stabilizing ? json(*p.stabilizing) : json(nullptr)}});
        }
        emit(json_text(rows), g.out);
        return all ? 0 : kExitPartial;
    });

    // wreath
    std::string factors = "S3", radii = "2", positions;
    int measure_radius = 8, rect_length = 24;
    std::uint64_t measure_budget = 3'000'000;
    auto* wr = app.add_subcommand("wreath", "wreath products W over the Grigorchuk action");
    wr->require_subcommand(1);
    auto plan_options = [&](CLI::App* sub) {
        sub->add_option("--factors", factors, "comma-separated lamp factors");
        sub->add_option("--m", radii, "radius schedule, one per lamp or a single value");
    };
    auto* wplan = wr->add_subcommand("plan", "placement plan JSON");
    plan_options(wplan);
    bind(wplan, [&] {
        emit(json_text(wreath::plan_json(make_plan(factors, radii, ""))), g.out);
        return 0;
    });
    auto* wverify = wr->add_subcommand("verify", "ball coincidence of W_k and W_{k+1} at radius m(k+1)");
    plan_options(wverify);
    wverify->add_option("--positions", positions, "override lamp positions n(k)");
    bind(wverify, [&] {
        const auto plan = make_plan(factors, radii, positions);
        json rows = json::array();
        bool all = true;
        for (std::size_t k = 0; k + 1 < plan.n.size(); ++k) {
            const auto c = wreath::verify_ball_coincidence(plan, k, plan.m[k + 1], g.budget);
            all = all && c.holds;
            rows.push_back({{"k", k},
                            {"radius", plan.m[k + 1]},
                            {"holds", c.holds},
                            {"ball_left", c.ball_size_left},
                            {"ball_right", c.ball_size_right}});
        }
        emit(json_text({{"positions", plan.positions()}, {"coincidence", rows}}), g.out);
        if (!all) {
            std::cerr << "ball coincidence fails\n";
            return positions.empty() ? kExitInternal : kExitUsage;  // a manual placement broke the precondition
        }
        return 0;
    });
    auto* wmeasure = wr->add_subcommand("measure", "Psi bi-Lipschitz measurement per factor");
    plan_options(wmeasure);
    wmeasure->add_option("--radius", measure_radius, "W-ball radius");
    wmeasure->add_option("--measure-budget", measure_budget, "W-ball element budget");
    wmeasure->add_option("--rectifier-length", rect_length, "longest rectifier word");
    wmeasure->add_option("--norm-budget", norm_budget, "longest balanced word considered");
    bind(wmeasure, [&] {
        const auto plan = make_plan(factors, radii, "");
        std::vector<wreath::PsiData> psis;
        std::vector<wreath::Bilipschitz> meas;
        int violations = 0;
        for (std::size_t f = 0; f < plan.factors.size(); ++f) {
            psis.push_back(wreath::psi_rectifiers(plan, f, rect_length));
            meas.push_back(wreath::measure_bilipschitz(plan, psis.back(), measure_radius, measure_budget, norm_budget));
            violations += meas.back().violations;
        }
        emit(json_text(wreath::plan_json(plan, psis, meas)), g.out);
        if (violations > 0) throw GuaranteeViolation("Psi leaves the (1, 2L'+1) envelope on " + std::to_string(violations) + " rows");
        return 0;
    });

    // distortion
    std::string metric_file, embedding_file, map_kind = "optimizer", rho_text;
    std::size_t dim = 0, anchors = 16;
    int iterations = 4000;
    auto* dist = app.add_subcommand("distortion", "Euclidean distortion");
    dist->require_subcommand(1);
    auto source_options = [&](CLI::App* sub) {
        auto* grp = sub->add_option("--group", group_spec, "group or graph spec");
        sub->add_option("--metric", metric_file, "distance matrix file: n, then n rows")->excludes(grp);
    };
    auto need_source = [&] {
        if (group_spec.empty() == metric_file.empty()) throw UsageError("give exactly one of --group and --metric");
    };

    auto* dprofile = dist->add_subcommand("profile", "rho_Phi as CSV, optionally against --rho");
    source_options(dprofile);
    dprofile->add_option("--embedding", embedding_file, "coordinates file (header: n dim)");
    dprofile->add_option("--map", map_kind, "map when no embedding is given")
        ->check(CLI::IsMember({"optimizer", "frechet", "spectral"}));
    dprofile->add_option("--anchors", anchors, "Frechet anchor count");
    dprofile->add_option("--rho", rho_text, "compression function to compare against");
    bind(dprofile, [&] {
        need_source();
        DistortionProfile prof;
        if (!metric_file.empty()) {
            const auto m = load_metric(metric_file);
            m.validate(g.tol);
            const auto phi = embedding_file.empty() ? min_distortion_embed(m, dim, 1e-6, iterations, g.seed).embedding
                                                    : load_embedding(embedding_file);
            prof = distortion_profile(m, phi);
        } else {
            auto r = resolve(group_spec, g);
            Embedding phi;
            if (!embedding_file.empty()) phi = load_embedding(embedding_file);
            else if (map_kind == "frechet") phi = frechet_embedding(r.graph, std::min<std::size_t>(anchors, r.graph.n), g.seed);
            else if (map_kind == "spectral") phi = spectral_embedding(r.graph, spectral_gap(r.graph, g.tol, g.seed).eigenvector);
            else phi = min_distortion_embed(FiniteMetric::from_graph(r.graph), dim, 1e-6, iterations, g.seed).embedding;
            prof = graph_profile(r.graph, phi);
        }
        std::ostringstream csv;
        if (rho_text.empty()) {
            write_profile_csv(csv, prof);
        } else {
            const auto rho = parse_rho(rho_text);
            csv.precision(17);
            csv << "t,rho_phi,rho\n";
            for (std::size_t i = 0; i < prof.t.size(); ++i) csv << prof.t[i] << "," << prof.rho[i] << "," << rho(prof.t[i]) << "\n";
            const auto cmp = compare_profiles(prof, rho, prof.t.empty() ? 1.0 : prof.t.back());
            json j = {{"verdict", verdict_name(cmp.verdict)}, {"horizon", cmp.horizon}, {"finite_horizon", cmp.finite_horizon}};
            if (cmp.better_at) j["better_at"] = *cmp.better_at;
            if (cmp.worse_at) j["worse_at"] = *cmp.worse_at;
            std::cerr << j.dump() << "\n";
        }
        emit(csv.str(), g.out);
        return 0;
    });

    auto* dbound = dist->add_subcommand("bound", "Poincare lower bound on Euclidean distortion");
    dbound->add_option("--group", group_spec, "group or graph spec")->required();
    bind(dbound, [&] {
        auto r = resolve(group_spec, g);
        const auto cert = certificate(r.graph, g.tol, g.seed);
        std::string csv = "t,P_t,M_t,t_over_M\n";
        for (const auto& row : cert.table) {
            std::ostringstream line;
            line.precision(17);
            line << row.t << "," << row.P_t << "," << row.M_t << "," << (row.P_t > 0 ? row.t / row.M_t : 0.0) << "\n";
            csv += line.str();
        }
        emit(csv, g.out);
        std::cerr << json({{"lower_bound", cert.lower_bound}, {"lambda1", cert.lambda1}, {"diameter", cert.diameter}}).dump()
                  << "\n";
        return 0;
    });

    auto* dopt = dist->add_subcommand("optimize", "least-distortion Euclidean embedding; coordinates to --out");
    source_options(dopt);
    dopt->add_option("--dim", dim, "target dimension (0: n - 1)");
    dopt->add_option("--iterations", iterations, "projection sweeps per bisection step")->check(CLI::PositiveNumber);
    bind(dopt, [&] {
        need_source();
        const auto m = metric_file.empty() ? FiniteMetric::from_graph(resolve(group_spec, g).graph) : load_metric(metric_file);
        m.validate(g.tol);
        const auto res = min_distortion_embed(m, dim, g.tol > 0 ? std::max(g.tol, 1e-9) : 1e-6, iterations, g.seed);
        std::ostringstream coords;
        write_embedding(coords, res.embedding);
        if (!g.out.empty()) emit(coords.str(), g.out);
        std::cout << json_text({{"D", res.D}, {"lower", res.lower}, {"converged", res.converged}, {"iterations", res.iterations}});
        return 0;
    });

    // pipeline
    std::string pipe_rho, family;
    int rounds = -1;
    auto* pipe = app.add_subcommand("pipeline", "index selection and report bundle");
    pipe->require_subcommand(1);
    auto* prun = pipe->add_subcommand("run", "run the selection and write the bundle to --out (default: report)");
    prun->add_option("--rho", pipe_rho, "compression function of t");
    prun->add_option("--rounds", rounds, "rounds to select")->check(CLI::NonNegativeNumber);
    prun->add_option("--family", family, "p:level[:genset], comma-separated");
    bind(prun, [&] {
        if (!pipe_rho.empty()) g.config.set("pipeline.rho", pipe_rho);
        if (rounds >= 0) g.config.set("pipeline.rounds", std::to_string(rounds));
        if (!family.empty()) g.config.set("pipeline.family", family);
        const auto settings = pipeline::Settings::from_config(g.config);
        const auto result = pipeline::run_pipeline(settings, &std::cerr);
        const fs::path out = g.out.empty() ? fs::path("report") : fs::path(g.out);
        pipeline::emit_report(result, settings, out);
        std::cerr << "bundle written to " << out.string() << "\n";
        return result.exit_code;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        g.resolve();
        return action();
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const GuaranteeViolation& e) {
        std::cerr << "internal assertion failed: " << e.what() << "\n";
        return kExitInternal;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
