// fba: command-line front end. Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fba/serialize.hpp"

using namespace fba::cli;

namespace {

struct Flags {
    std::string q, s, v, subset, sweep;
    CLI::Option* n = nullptr;
    CLI::Option* m = nullptr;
    CLI::Option* j = nullptr;
    int n_val = 0, m_val = 0, j_val = 0;
    double tol_val = 0.0;
};

std::vector<int> parse_int_list(const std::string& flag, const std::string& text) {
    std::vector<int> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(flag, "expected a comma-separated integer list, got '" + text + "'");
        }
    }
    return out;
}

std::pair<std::string, std::vector<double>> parse_sweep(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw UsageError("--sweep", "expected q=v1,v2,... or s=v1,v2,...");
    std::string key = text.substr(0, eq);
    if (key != "q" && key != "s") throw UsageError("--sweep", "only q or s can be swept");
    std::vector<double> vals;
    std::stringstream in(text.substr(eq + 1));
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            std::size_t used = 0;
            vals.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("--sweep", "bad value '" + item + "'");
        }
    }
    if (vals.empty()) throw UsageError("--sweep", "no values given");
    return {key, vals};
}

unsigned worker_count(std::size_t jobs) {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FBA_THREADS")) {
        const int e = std::atoi(env);
        if (e > 0) n = static_cast<unsigned>(e);
    }
    return static_cast<unsigned>(std::min<std::size_t>(n, jobs));
}

std::vector<Result> run_all(const std::vector<RunConfig>& cfgs) {
    std::vector<Result> results(cfgs.size());
    std::vector<std::exception_ptr> errors(cfgs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next++) < cfgs.size();) {
            try {
                results[i] = run(cfgs[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const unsigned nw = worker_count(cfgs.size());
    for (unsigned t = 1; t < nw; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
    // Lowest sweep index wins, so the reported error does not depend on scheduling.
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return results;
}

std::string csv_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string render_csv(const std::vector<Result>& rs, const std::string& key, const std::vector<double>& vals) {
    std::string out;
    const bool sweep = !key.empty();
    out += sweep ? key + "," : "";
    for (std::size_t i = 0; i < rs[0].header.size(); ++i) out += (i ? "," : "") + rs[0].header[i];
    out += "\n";
    for (std::size_t k = 0; k < rs.size(); ++k) {
        if (rs[k].header.empty()) throw UsageError("--format", "no CSV rows produced (a run failed)");
        for (const auto& row : rs[k].rows) {
            if (sweep) out += csv_number(vals[k]) + ",";
            for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + csv_number(row[i]);
            out += "\n";
        }
    }
    return out;
}

void add_output(CLI::App* sc, RunConfig& cfg, Flags& f, bool sweep) {
    sc->add_option("--out", cfg.out, "Write output to this file instead of stdout");
    sc->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    if (sweep) sc->add_option("--sweep", f.sweep, "Parameter sweep, e.g. q=0.05,0.1,0.2");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Functional Bethe ansatz toolkit for the sinh-Gordon chain"};
    app.require_subcommand(1);
    RunConfig cfg;
    Flags f;

    auto qs = [&](CLI::App* sc) {
        sc->add_option("--q", f.q, "Quantum parameter q, 're' or 're,im'");
        sc->add_option("--s", f.s, "Parameter s, 're' or 're,im'");
    };
    auto tol = [&](CLI::App* sc) { return sc->add_option("--tol", f.tol_val, "Tolerance override"); };

    auto* vi = app.add_subcommand("verify-identities", "Special-function, pentagon, 6j and inversion checks");
    qs(vi);
    vi->add_option("--nodes", cfg.nodes, "Quadrature nodes");
    vi->add_option("--seed", cfg.seed, "RNG seed for sample points");
    auto* vi_tol = tol(vi);
    add_output(vi, cfg, f, true);

    auto* vs = app.add_subcommand("verify-states", "Separated eigenstate relations for n = 2, 3");
    qs(vs);
    f.n = vs->add_option("--n", f.n_val, "Chain length (2 or 3)");
    vs->add_option("--nodes", cfg.nodes, "Minimum quadrature nodes (n = 3)");
    vs->add_option("--points", cfg.points, "Number of random sample points");
    vs->add_option("--seed", cfg.seed, "RNG seed for sample points");
    auto* vs_tol = tol(vs);
    add_output(vs, cfg, f, true);

    auto* sg = app.add_subcommand("solve-ground", "Solve the Bethe equations for the ground state");
    qs(sg);
    auto* sg_n = sg->add_option("--n", f.n_val, "Chain length");
    sg->add_option("--q-steps", cfg.q_steps, "Homotopy steps in q");
    sg->add_option("--depth", cfg.depth, "Matrix-product depth K (0: automatic)");
    auto* sg_tol = sg->add_option("--tol", f.tol_val, "Newton tolerance");
    add_output(sg, cfg, f, true);

    auto* ts = app.add_subcommand("tropical-seed", "Build and verify a tropical seed");
    ts->add_option("--s", f.s, "Parameter s, 're' or 're,im'");
    ts->add_option("--v", f.v, "Unimodular v for ground seeds, 're' or 're,im'");
    auto* ts_n = ts->add_option("--n", f.n_val, "Chain length");
    f.m = ts->add_option("--m", f.m_val, "Particle number parameter (even seeds: 2m particles)");
    f.j = ts->add_option("--j", f.j_val, "One-particle momentum index");
    ts->add_option("--subset", f.subset, "Even seeds: 2m comma-separated indices");
    ts->add_option("--branch", cfg.branch, "Branch k: '1' or 'omega-half'");
    auto* ts_tol = ts->add_option("--tol", f.tol_val, "Coefficientwise tolerance");
    add_output(ts, cfg, f, true);

    auto* de = app.add_subcommand("density", "Root density: functional equation, tropical and empirical forms");
    qs(de);
    auto* de_n = de->add_option("--n", f.n_val, "Number of tropical roots for the empirical density");
    de->add_option("--nodes", cfg.nodes, "Quadrature nodes");
    de->add_option("--points", cfg.points, "Number of output samples");
    auto* de_tol = de->add_option("--tol", f.tol_val, "Residual tolerance");
    add_output(de, cfg, f, true);

    auto* pa = app.add_subcommand("partition", "Partition function per site: series vs integral");
    qs(pa);
    pa->add_option("--nodes", cfg.nodes, "Quadrature nodes");
    pa->add_option("--points", cfg.points, "Number of points on |z| = 1");
    auto* pa_tol = pa->add_option("--tol", f.tol_val, "Tolerance");
    add_output(pa, cfg, f, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        cfg.command = sub->get_name();
        for (CLI::Option* o : {f.n, sg_n, ts_n, de_n})
            if (o && o->count()) cfg.n = f.n_val;
        if (f.m && f.m->count() && sub == ts) cfg.m = f.m_val;
        if (f.j && f.j->count() && sub == ts) cfg.j = f.j_val;
        for (CLI::Option* o : {vi_tol, vs_tol, sg_tol, ts_tol, de_tol, pa_tol})
            if (o && o->count()) cfg.tol = f.tol_val;
        if (!f.q.empty()) cfg.q = parse_complex("--q", f.q);
        if (!f.s.empty()) cfg.s = parse_complex("--s", f.s);
        if (!f.v.empty()) cfg.v = parse_complex("--v", f.v);
        if (!f.subset.empty()) cfg.subset = parse_int_list("--subset", f.subset);

        std::vector<RunConfig> cfgs;
        std::string key;
        std::vector<double> vals;
        if (!f.sweep.empty()) {
            std::tie(key, vals) = parse_sweep(f.sweep);
            if (key == "q" && cfg.command == "tropical-seed")
                throw UsageError("--sweep", "tropical-seed has no q");
            for (double x : vals) {
                RunConfig c = cfg;
                (key == "q" ? c.q : c.s) = fba::cplx{x, 0.0};
                cfgs.push_back(c);
            }
        } else {
            cfgs.push_back(cfg);
        }

        const std::vector<Result> rs = run_all(cfgs);
        bool pass = true;
        for (const auto& r : rs) pass = pass && r.pass;

        std::string text;
        if (cfg.format == "csv") {
            text = render_csv(rs, key, vals);
        } else if (key.empty()) {
            text = rs[0].json.dump(2) + "\n";
        } else {
            nlohmann::json j = {{"schema", fba::kSchemaVersion},
                                {"command", cfg.command},
                                {"sweep", {{"param", key}, {"values", vals}}},
                                {"results", nlohmann::json::array()},
                                {"pass", pass}};
            for (const auto& r : rs) j["results"].push_back(r.json);
            text = j.dump(2) + "\n";
        }
        if (cfg.out.empty()) {
            std::cout << text;
        } else {
            std::ofstream os(cfg.out, std::ios::binary);
            if (!os) throw UsageError("--out", "cannot open '" + cfg.out + "' for writing");
            os << text;
        }
        return pass ? 0 : 1;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
