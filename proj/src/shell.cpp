#include "subforge/shell.hpp"

#include "subforge/certify.hpp"
#include "subforge/embedder.hpp"
#include "subforge/experiments.hpp"
#include "subforge/graph_io.hpp"
#include "subforge/patterns.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace subforge {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMiss = 2;
constexpr int kExitError = 3;

enum class LogLevel { quiet, info, trace };

struct Logger {
    LogLevel level = LogLevel::info;
    void info(const std::string &msg) const {
        if (level != LogLevel::quiet)
            std::cout << msg << "\n";
    }
    void trace(const std::string &msg) const {
        if (level == LogLevel::trace)
            std::cout << "  " << msg << "\n";
    }
};

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << content;
}

RunConfig load_config_opt(const std::string &path) {
    RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
    if (const char *env = std::getenv("SUBFORGE_SEED")) {
        cfg.seed = std::stoull(env);
    }
    return cfg;
}

std::string outcome_json(const EmbeddingOutcome &outcome) {
    nlohmann::ordered_json j;
    j["success"] = outcome.certificate.has_value();
    j["hypotheses_ok"] = outcome.hypotheses_ok;
    if (!outcome.failure_stage.empty())
        j["failure_stage"] = outcome.failure_stage;
    if (outcome.certificate) {
        j["mode"] = outcome.achieved.kind == CertMode::balanced ? "balanced" : "bounded";
        j["ell"] = outcome.achieved.ell;
    }
    j["stages"] = outcome.stage_log;
    return j.dump(2) + "\n";
}

int cmd_generate(const std::string &family, int a, int b, double p, std::uint64_t seed, int t,
                 int k_blocks, double q, const std::string &factor_path, int r,
                 const std::string &out_path, const Logger &log) {
    HostGraph g;
    if (family == "clique")
        g = make_clique(a);
    else if (family == "complete_bipartite")
        g = make_complete_bipartite(a, b);
    else if (family == "random_bipartite")
        g = make_random_bipartite(a, b, p, seed);
    else if (family == "grid")
        g = make_grid(a, b);
    else if (family == "hypercube")
        g = make_hypercube(a);
    else if (family == "cycle")
        g = make_cycle(a);
    else if (family == "path")
        g = make_path(a);
    else if (family == "erdos_renyi")
        g = make_erdos_renyi(a, p, seed);
    else if (family == "sbm") {
        SbmParams sp;
        sp.t = t;
        sp.k_blocks = k_blocks;
        sp.n = 2 * t * k_blocks;
        sp.p = p;
        sp.q = q;
        sp.seed = seed;
        g = gen_sbm(sp);
    } else if (family == "cartesian_power") {
        if (factor_path.empty())
            throw std::invalid_argument("cartesian_power needs --factor");
        HostGraph f = read_edge_list_file(factor_path);
        g = cartesian_power(f, r);
    } else {
        throw std::invalid_argument("unknown family: " + family);
    }
    write_file(out_path, write_edge_list(g));
    log.info("wrote " + out_path + ": n=" + std::to_string(g.vertex_count()) + " m=" +
             std::to_string(g.edge_count()));
    return kExitOk;
}

int cmd_stats(const std::string &graph_path, bool as_json) {
    HostGraph g = read_edge_list_file(graph_path);
    DegreeStats st = stats(g);
    if (as_json) {
        nlohmann::ordered_json j;
        j["n"] = g.vertex_count();
        j["m"] = g.edge_count();
        j["avg_degree"] = st.avg.str();
        j["min_degree"] = st.min;
        j["max_degree"] = st.max;
        j["bipartite"] = g.has_bipartition();
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "n=" << g.vertex_count() << " m=" << g.edge_count() << " d=" << st.avg
                  << " min=" << st.min << " max=" << st.max
                  << (g.has_bipartition() ? " bipartite" : "") << "\n";
    }
    return kExitOk;
}

int cmd_extract(const std::string &graph_path, const std::string &config_path, bool bipartite,
                const std::string &out_path, const std::string &report_path, const Logger &log) {
    HostGraph g = read_edge_list_file(graph_path);
    RunConfig cfg = load_config_opt(config_path);
    double d1 = std::max(0.25, stats(g).avg.to_double() / 8.0);
    ExpanderParams params{cfg.eps1, cfg.eps2, cfg.eps2 * d1, cfg.log_base};
    auto res = extract_expander(g, params, bipartite, cfg.exact_cap, cfg.sample_trials, cfg.seed);
    if (!report_path.empty())
        write_file(report_path, res.report.to_json() + "\n");
    if (!res.graph) {
        std::cerr << "extraction failed: " << res.diagnostic << "\n";
        return kExitMiss;
    }
    log.info("expander: n=" + std::to_string(res.graph->vertex_count()) + " d=" +
             res.output_avg.str() + " delta=" + std::to_string(res.output_min_degree));
    log.trace(res.report.to_json());
    if (!out_path.empty())
        write_file(out_path, write_edge_list(*res.graph));
    return kExitOk;
}

int cmd_find(const std::string &graph_path, const std::string &pattern_path,
             const std::string &config_path, const std::string &mode, int ell,
             const std::string &out_path, const std::string &stages_path, const Logger &log) {
    HostGraph g = read_edge_list_file(graph_path);
    PatternGraph h = read_edge_list_file(pattern_path);
    RunConfig cfg = load_config_opt(config_path);
    if (ell > 0)
        cfg.ell_search_cap = ell + 1;
    EmbeddingOutcome outcome;
    if (mode == "balanced")
        outcome = embed_balanced(g, h, cfg);
    else if (mode == "sparse")
        outcome = find_subdivision_sparse(g, h, cfg);
    else if (mode == "dense")
        outcome = embed_dense_short(g, h, cfg);
    else
        throw std::invalid_argument("unknown mode: " + mode);
    for (const auto &line : outcome.stage_log)
        log.trace(line);
    if (!stages_path.empty())
        write_file(stages_path, outcome_json(outcome));
    if (!outcome.certificate) {
        log.info("miss: " + outcome.failure_stage);
        if (!out_path.empty())
            write_file(out_path, outcome_json(outcome));
        return kExitMiss;
    }
    auto verdict = verify_subdivision(g, h, *outcome.certificate);
    if (!verdict.accepted) {
        std::cerr << "internal error: unverified certificate: " << verdict.violation << "\n";
        return kExitError;
    }
    if (!out_path.empty())
        write_file(out_path, certificate_to_json(*outcome.certificate));
    log.info(std::string("found ") +
             (outcome.achieved.kind == CertMode::balanced ? "balanced" : "bounded") + " ell=" +
             std::to_string(outcome.achieved.ell));
    return kExitOk;
}

int cmd_build_gadget(const std::string &graph_path, const std::string &kind, int h0, int h1,
                     int h2, int h3, int d_size, int m, int r, const std::string &out_path,
                     const Logger &log) {
    HostGraph g = read_edge_list_file(graph_path);
    VertexSet avoid;
    std::optional<GadgetRecord> record;
    std::string failure;
    if (kind == "unit") {
        auto res = build_unit(g, avoid, h1, h2, h3);
        if (res)
            record = GadgetRecord(std::move(*res.value));
        else
            failure = res.stage + ": " + res.detail;
    } else if (kind == "web") {
        auto res = build_web(g, avoid, h0, h1, h2, h3);
        if (res)
            record = GadgetRecord(std::move(*res.value));
        else
            failure = res.stage + ": " + res.detail;
    } else if (kind == "adjuster") {
        auto res = r <= 1 ? build_simple_adjuster(g, avoid, d_size, m)
                          : chain_adjusters(g, avoid, d_size, m, r);
        if (res)
            record = GadgetRecord(std::move(*res.value));
        else
            failure = res.stage + ": " + res.detail;
    } else if (kind == "octopus") {
        auto res = build_octopus(g, avoid, d_size, m, r, 4 * m);
        if (res)
            record = GadgetRecord(std::move(*res.value));
        else
            failure = res.stage + ": " + res.detail;
    } else {
        throw std::invalid_argument("unknown gadget kind: " + kind);
    }
    if (!record) {
        log.info("miss: " + failure);
        return kExitMiss;
    }
    auto verdict = validate_gadget(g, *record);
    if (!verdict.valid) {
        std::cerr << "internal error: invalid gadget: " << verdict.violated_clause << "\n";
        return kExitError;
    }
    if (!out_path.empty())
        write_file(out_path, gadget_to_json(*record));
    log.info("built " + kind);
    return kExitOk;
}

int cmd_verify(const std::string &graph_path, const std::string &pattern_path,
               const std::string &cert_path) {
    HostGraph g = read_edge_list_file(graph_path);
    PatternGraph h = read_edge_list_file(pattern_path);
    std::ifstream in(cert_path);
    if (!in)
        throw std::runtime_error("cannot open certificate: " + cert_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    SubdivisionCertificate cert = certificate_from_json(ss.str());
    auto verdict = verify_subdivision(g, h, cert);
    std::cout << (verdict.accepted ? "accept" : "reject: " + verdict.violation) << "\n";
    return kExitOk;
}

int cmd_lowerbound(const std::string &pattern_path, int n1, long long samples,
                   std::uint64_t seed, int seeds, int jobs, const std::string &out_json,
                   const std::string &out_csv, const Logger &log) {
    PatternGraph h = read_edge_list_file(pattern_path);
    // Trials are independent per seed; --jobs fans them out over threads.
    std::vector<LowerBoundReport> reports(static_cast<std::size_t>(seeds));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= seeds)
                return;
            reports[static_cast<std::size_t>(i)] =
                lowerbound_experiment(h, n1, samples, seed + static_cast<std::uint64_t>(i));
        }
    };
    int threads = std::max(1, std::min(jobs, seeds));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto &t : pool)
            t.join();
    }
    for (int i = 0; i < seeds; ++i) {
        const auto &rep = reports[static_cast<std::size_t>(i)];
        log.info("seed " + std::to_string(seed + static_cast<std::uint64_t>(i)) +
                 ": mean_missing=" + std::to_string(rep.mean_missing) + " min=" +
                 std::to_string(rep.min_missing) + " frac_below_quarter=" +
                 std::to_string(rep.frac_below_quarter));
    }
    if (!out_json.empty()) {
        std::string blob = "[\n";
        for (int i = 0; i < seeds; ++i)
            blob += reports[static_cast<std::size_t>(i)].to_json() +
                    (i + 1 < seeds ? ",\n" : "");
        blob += "]\n";
        write_file(out_json, seeds == 1 ? reports[0].to_json() : blob);
    }
    if (!out_csv.empty()) {
        std::string blob = LowerBoundReport::csv_header() + "\n";
        for (const auto &rep : reports)
            blob += rep.to_csv_row() + "\n";
        write_file(out_csv, blob);
    }
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string> &args) {
    CLI::App app{"subforge: balanced-subdivision toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand
    std::string log_level = "info";
    app.add_option("--log-level", log_level)->check(CLI::IsMember({"quiet", "info", "trace"}));

    // generate
    auto *gen = app.add_subcommand("generate", "write a graph in edge-list format");
    std::string family, gen_out = "graph.txt", factor_path;
    int ga = 4, gb = 4, gt = 3, gk = 4, gr = 2;
    double gp = 0.5, gq = 0.5;
    std::uint64_t gseed = 0;
    gen->add_option("--family", family)->required();
    gen->add_option("--a", ga);
    gen->add_option("--b", gb);
    gen->add_option("--p", gp);
    gen->add_option("--q", gq);
    gen->add_option("--t", gt);
    gen->add_option("--k", gk);
    gen->add_option("--r", gr);
    gen->add_option("--seed", gseed);
    gen->add_option("--factor", factor_path);
    gen->add_option("--out", gen_out);

    // stats
    auto *st = app.add_subcommand("stats", "degree statistics of a graph");
    std::string st_graph;
    bool st_json = false;
    st->add_option("--graph", st_graph)->required();
    st->add_flag("--json", st_json);

    // extract-expander
    auto *ex = app.add_subcommand("extract-expander", "extract a verified expander subgraph");
    std::string ex_graph, ex_config, ex_out, ex_report;
    bool ex_bipartite = false;
    ex->add_option("--graph", ex_graph)->required();
    ex->add_option("--config", ex_config);
    ex->add_flag("--bipartite", ex_bipartite);
    ex->add_option("--out", ex_out);
    ex->add_option("--report", ex_report);

    // find-subdivision
    auto *fs = app.add_subcommand("find-subdivision", "search for a subdivision certificate");
    std::string fs_graph, fs_pattern, fs_config, fs_mode = "balanced", fs_out, fs_stages;
    int fs_ell = 0;
    fs->add_option("--graph", fs_graph)->required();
    fs->add_option("--pattern", fs_pattern)->required();
    fs->add_option("--config", fs_config);
    fs->add_option("--mode", fs_mode)->check(CLI::IsMember({"balanced", "sparse", "dense"}));
    fs->add_option("--ell", fs_ell);
    fs->add_option("--out", fs_out);
    fs->add_option("--stages", fs_stages);

    // build-gadget
    auto *bg = app.add_subcommand("build-gadget", "construct and validate a gadget");
    std::string bg_graph, bg_kind, bg_out;
    int bg_h0 = 2, bg_h1 = 2, bg_h2 = 2, bg_h3 = 4, bg_d = 4, bg_m = 2, bg_r = 1;
    bg->add_option("--graph", bg_graph)->required();
    bg->add_option("--kind", bg_kind)->required()
        ->check(CLI::IsMember({"unit", "web", "adjuster", "octopus"}));
    bg->add_option("--h0", bg_h0);
    bg->add_option("--h1", bg_h1);
    bg->add_option("--h2", bg_h2);
    bg->add_option("--h3", bg_h3);
    bg->add_option("--D", bg_d);
    bg->add_option("--m", bg_m);
    bg->add_option("--r", bg_r);
    bg->add_option("--out", bg_out);

    // verify
    auto *vf = app.add_subcommand("verify", "verify a certificate file");
    std::string vf_graph, vf_pattern, vf_cert;
    vf->add_option("--graph", vf_graph)->required();
    vf->add_option("--pattern", vf_pattern)->required();
    vf->add_option("--cert", vf_cert)->required();

    // lowerbound
    auto *lb = app.add_subcommand("lowerbound", "missing-edge statistics over random hosts");
    std::string lb_pattern, lb_json, lb_csv;
    int lb_n1 = 100, lb_seeds = 1, lb_jobs = 1;
    long long lb_samples = 10000;
    std::uint64_t lb_seed = 0;
    lb->add_option("--pattern", lb_pattern)->required();
    lb->add_option("--n1", lb_n1);
    lb->add_option("--samples", lb_samples);
    lb->add_option("--seed", lb_seed);
    lb->add_option("--seeds", lb_seeds);
    lb->add_option("--jobs", lb_jobs);
    lb->add_option("--out", lb_json);
    lb->add_option("--csv", lb_csv);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        std::stringstream dummy;
        int code = app.exit(e, dummy, dummy);
        if (code == 0) { // --help
            std::cout << app.help();
            return kExitOk;
        }
        std::cerr << dummy.str();
        return kExitError;
    }

    Logger log;
    log.level = log_level == "quiet" ? LogLevel::quiet
                                     : (log_level == "trace" ? LogLevel::trace : LogLevel::info);
    try {
        if (*gen)
            return cmd_generate(family, ga, gb, gp, gseed, gt, gk, gq, factor_path, gr, gen_out,
                                log);
        if (*st)
            return cmd_stats(st_graph, st_json);
        if (*ex)
            return cmd_extract(ex_graph, ex_config, ex_bipartite, ex_out, ex_report, log);
        if (*fs)
            return cmd_find(fs_graph, fs_pattern, fs_config, fs_mode, fs_ell, fs_out, fs_stages,
                            log);
        if (*bg)
            return cmd_build_gadget(bg_graph, bg_kind, bg_h0, bg_h1, bg_h2, bg_h3, bg_d, bg_m,
                                    bg_r, bg_out, log);
        if (*vf)
            return cmd_verify(vf_graph, vf_pattern, vf_cert);
        if (*lb)
            return cmd_lowerbound(lb_pattern, lb_n1, lb_samples, lb_seed, lb_seeds, lb_jobs,
                                  lb_json, lb_csv, log);
    } catch (const ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

} // namespace subforge
