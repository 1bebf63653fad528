#include "cli.hpp"

#include "cotype/abelian_groups.hpp"
#include "cotype/errors.hpp"
#include "cotype/lattice.hpp"
#include "cotype/partition.hpp"
#include "cotype/qcombinatorics.hpp"
#include "cotype/random_matrix.hpp"
#include "cotype/zeta_engine.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

namespace cotype::cli {

using nlohmann::json;

namespace {

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
    return os.str();
}

json json_int(const mpz_class& z) {
    if (z.fits_slong_p()) return z.get_si();
    return z.get_str();
}

std::string to_text(const IntPolynomial& p) { return p.to_string(); }
std::string to_text(const mpz_class& z) { return z.get_str(); }
std::string to_text(const mpq_class& q) { return q.get_str(); }

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(item, &used);
        } catch (const std::exception&) {
            throw DomainError("not an integer list: " + text);
        }
        if (used != item.size()) throw DomainError("not an integer list: " + text);
        out.push_back(v);
    }
    return out;
}

unsigned default_workers() { return std::max(1u, std::thread::hardware_concurrency()); }

// Collects pass/fail checks for a verify suite. With `inject` set, the first
// comparison is corrupted so the failure path can be exercised end to end.
class Checker {
public:
    explicit Checker(bool inject) : inject_(inject) {}

    template <class T>
    void compare(json where, T lhs, const T& rhs) {
        if (inject_ && checks_ == 0) lhs = lhs + T(1);
        ++checks_;
        if (!(lhs == rhs)) {
            where["lhs"] = to_text(lhs);
            where["rhs"] = to_text(rhs);
            failures_.push_back(std::move(where));
        }
    }

    std::uint64_t checks() const { return checks_; }
    const std::vector<json>& failures() const { return failures_; }

private:
    bool inject_;
    std::uint64_t checks_ = 0;
    std::vector<json> failures_;
};

struct Run {
    std::ostringstream out;
    std::string subcommand;
    std::optional<std::uint64_t> seed;
    EnumerationLimits limits = EnumerationLimits::from_environment();
    int code = kSuccess;
};

// ------------------------------------------------------------------ tally

struct TallyArgs {
    int d = 2;
    std::uint64_t bound = 2;
    std::string format = "json";
    std::string out_path;
    unsigned workers = default_workers();
};

void cmd_tally(const TallyArgs& a, Run& run) {
    const auto tally = tally_cotypes(a.d, a.bound, run.limits, a.workers);
    json summary;
    summary["d"] = a.d;
    summary["X"] = a.bound;
    summary["convention"] = "index < X";
    summary["N"] = json_int(tally.total);
    json by_corank = json::object();
    for (int m = 0; m <= a.d; ++m) by_corank[std::to_string(m)] = json_int(tally.corank_at_most(m));
    summary["N_corank_at_most"] = by_corank;

    std::string export_text;
    if (a.format == "csv") {
        std::ostringstream os;
        os << "cotype,index,corank,count\n";
        for (const auto& [c, n] : tally.counts)
            os << '"' << c.to_string() << "\"," << c.index().get_str() << ',' << c.corank() << ',' << n.get_str() << '\n';
        export_text = os.str();
    } else {
        json rows = json::array();
        for (const auto& [c, n] : tally.counts)
            rows.push_back({{"cotype", c.alpha()}, {"index", json_int(c.index())}, {"corank", c.corank()},
                            {"count", json_int(n)}});
        json full = summary;
        full["cotypes"] = rows;
        export_text = full.dump(2) + "\n";
    }

    if (a.out_path.empty()) {
        run.out << export_text;
    } else {
        std::ofstream f(a.out_path, std::ios::binary);
        if (!f) throw DomainError("cannot write " + a.out_path);
        f << export_text;
        summary["export"] = a.out_path;
        summary["format"] = a.format;
        run.out << summary.dump(2) << "\n";
    }
}

// ------------------------------------------------------------------ density

struct DensityArgs {
    int d = 2;
    int m = 1;
    std::uint64_t cutoff = 1'000'000;
    std::string spot_primes = "2,3,5";
    unsigned workers = default_workers();
};

void cmd_density(const DensityArgs& a, Run& run) {
    EulerOptions opt;
    opt.workers = a.workers;
    json j;
    j["d"] = a.d;
    j["m"] = a.m;
    j["corank_density"] = corank_density(a.d, a.m, a.cutoff, opt).to_json();
    j["corank_zeta_residue"] = corank_zeta_residue(a.d, a.m, a.cutoff, opt).to_json();
    if (a.m == 1 && a.d >= 2) j["theta_d"] = theta_d(a.d, a.cutoff, opt).to_json();
    json spots = json::array();
    for (int p : parse_int_list(a.spot_primes)) {
        const mpq_class z = stanley_wang_Zd(a.d, p, a.m);
        spots.push_back({{"p", p}, {"Z_d(p,m)", z.get_str()}, {"value", z.get_d()}, {"exact", true}});
    }
    j["local_factors"] = spots;
    run.out << j.dump(2) << "\n";
}

// ------------------------------------------------------------------ verify

struct VerifyArgs {
    int n = 8, e = 4, d = 6, p = 2, emax = 4, max_exp = 6;
    std::string primes = "2,3,5";
    bool inject = false;
};

json suite_qident(const VerifyArgs& a, Checker& ck) {
    for (int n = 0; n <= a.n; ++n)
        for (int e = 0; e <= a.e; ++e) ck.compare(json{{"identity", "qid"}, {"n", n}, {"e", e}}, lemma_qid_sum(n, e), IntPolynomial(1));
    for (int d = 1; d <= a.d; ++d)
        for (int i = 1; i <= d; ++i)
            ck.compare(json{{"identity", "qid2"}, {"d", d}, {"i", i}}, lemma_qid2_lhs(d, i), lemma_qid2_rhs(d, i));
    return {{"n", a.n}, {"e", a.e}, {"d", a.d}};
}

json suite_descent(const VerifyArgs& a, Checker& ck) {
    if (a.d > kDefaultPermutationCap) throw CapExceeded("descent suite enumerates permutations; d <= 9");
    for (int d = 1; d <= a.d; ++d)
        for (std::uint32_t mask = 0; mask < (1u << (d - 1)); ++mask) {
            const auto lambda = DescentSet::from_mask(d, mask);
            const auto ie = descent_poly_inclusion_exclusion(lambda);
            json where{{"d", d}, {"lambda", lambda.elements()}};
            where["methods"] = "inclusion-exclusion vs permutations";
            ck.compare(where, ie, descent_poly_permutations(lambda, a.d));
            where["methods"] = "inclusion-exclusion vs determinant";
            ck.compare(where, ie, descent_poly_determinant(lambda));
        }
    return {{"d", a.d}};
}

json suite_oracle(const VerifyArgs& a, Checker& ck, const EnumerationLimits& limits) {
    if (!is_prime(a.p)) throw DomainError(std::to_string(a.p) + " is not prime");
    std::uint64_t n = 1;
    for (int e = 0; e <= a.emax; ++e, n *= static_cast<std::uint64_t>(a.p)) {
        const auto tally = tally_index_range(a.d, n, n + 1, limits);
        for (const auto& nu : partitions_of(e, a.d)) {
            std::vector<std::int64_t> alpha(static_cast<std::size_t>(a.d), 1);
            for (int i = 1; i <= nu.rank(); ++i)
                for (int k = 0; k < nu.part(i); ++k) alpha[static_cast<std::size_t>(i - 1)] *= a.p;
            const std::vector<int> exps(nu.parts().begin(), nu.parts().end());
            const mpz_class counted = tally.count_of(Cotype(alpha));
            ck.compare(json{{"nu", exps}, {"route", "coefficient formula vs enumeration"}},
                       local_coefficient(a.d, a.p, exps), counted);
            ck.compare(json{{"nu", exps}, {"route", "series expansion vs enumeration"}},
                       local_coefficient_series(a.d, a.p, exps), counted);
        }
    }
    return {{"d", a.d}, {"p", a.p}, {"emax", a.emax}};
}

json suite_autorder(const VerifyArgs& a, Checker& ck) {
    for (const auto& lam : partitions_in_box(a.max_exp, a.max_exp)) {
        if (lam.size() > a.max_exp) continue;
        const AbelianPGroupType g(a.p, lam);
        const mpz_class closed = aut_order(g, AutMethod::closed_form);
        json where{{"p", a.p}, {"lambda", lam.parts()}};
        where["methods"] = "tuple identity vs closed form";
        ck.compare(where, aut_order(g, AutMethod::tuple_identity), closed);
        where["methods"] = "brute force vs closed form";
        ck.compare(where, aut_order(g, AutMethod::brute_force), closed);
    }
    return {{"p", a.p}, {"max_exp", a.max_exp}};
}

json suite_zidentity(const VerifyArgs& a, Checker& ck) {
    const auto primes = parse_int_list(a.primes);
    for (int d = 1; d <= a.d; ++d)
        for (int p : primes)
            for (int m = 1; m <= d; ++m)
                ck.compare(json{{"d", d}, {"p", p}, {"m", m}}, stanley_wang_Zd(d, p, m),
                           corank_density_local_factor(d, m, p));
    return {{"d", a.d}, {"primes", primes}};
}

void cmd_verify(const std::string& suite, const VerifyArgs& a, Run& run, std::ostream& err) {
    Checker ck(a.inject);
    json params;
    if (suite == "qident")
        params = suite_qident(a, ck);
    else if (suite == "descent")
        params = suite_descent(a, ck);
    else if (suite == "oracle")
        params = suite_oracle(a, ck, run.limits);
    else if (suite == "autorder")
        params = suite_autorder(a, ck);
    else
        params = suite_zidentity(a, ck);

    json j;
    j["suite"] = suite;
    j["parameters"] = params;
    j["checks"] = ck.checks();
    j["failures"] = ck.failures();
    j["verdict"] = ck.failures().empty() ? "pass" : "fail";
    if (!ck.failures().empty()) {
        j["counterexample"] = ck.failures().front();
        err << "verify " << suite << ": " << ck.failures().size() << " of " << ck.checks()
            << " checks failed; counterexample: " << ck.failures().front().dump() << "\n";
        run.code = kVerificationFailure;
    }
    run.out << j.dump(2) << "\n";
}

// ------------------------------------------------------------------ simulate

struct SimulateArgs {
    SampleConfig cfg;
    std::string stat;
    int cap = 3;
    std::string csv_path;
};

void cmd_simulate(SampleModel model, SimulateArgs a, Run& run) {
    a.cfg.validate(model);
    std::string stat_name = a.stat.empty() ? (model == SampleModel::matrix ? "rank" : "type") : a.stat;
    const Statistic stat = stat_name == "rank" ? Statistic::p_rank : Statistic::p_type;
    if (stat == Statistic::p_type) a.cfg.exponent_cap = a.cap;
    run.seed = a.cfg.seed;

    const auto table = tabulate(a.cfg, model, stat);
    const auto theory =
        stat == Statistic::p_rank ? rank_d_rank_theory(a.cfg.d, a.cfg.p) : rank_d_type_theory(a.cfg.d, a.cfg.p, a.cap);
    const auto report = compare_to_theory(table, theory);

    json j;
    j["config"] = a.cfg.to_json(model);
    j["config"]["statistic"] = stat_name;
    j["empirical"] = table.to_json();
    j["theory"] = theory;
    j["report"] = report.to_json();
    if (stat == Statistic::p_rank) j["cumulative"] = cumulative_rank_check(table, a.cfg.d, a.cfg.p).to_json();
    if (!a.csv_path.empty()) {
        std::ofstream f(a.csv_path, std::ios::binary);
        if (!f) throw DomainError("cannot write " + a.csv_path);
        f << table.to_csv();
        j["csv"] = a.csv_path;
    }
    run.out << j.dump(2) << "\n";
}

// ------------------------------------------------------------------ zeta

struct ZetaArgs {
    int d = 2;
    int p = 2;
    std::string nu;
    std::string format = "json";
};

void cmd_zeta(const std::string& action, const ZetaArgs& a, Run& run) {
    if (action == "print-local") {
        const auto f = local_factor(a.d);
        if (a.format == "text") {
            run.out << f.to_string() << "\n";
            return;
        }
        json terms = json::array();
        for (const auto& [mask, w] : f.numerator())
            terms.push_back({{"lambda", DescentSet::from_mask(a.d, mask).elements()}, {"w", w.to_string()}});
        run.out << json{{"d", a.d}, {"local_factor", f.to_string()}, {"numerator", terms}}.dump(2) << "\n";
        return;
    }
    const auto nu = parse_int_list(a.nu);
    const mpz_class f = local_coefficient(a.d, a.p, nu);
    if (a.format == "text") {
        run.out << f.get_str() << "\n";
        return;
    }
    run.out << json{{"d", a.d}, {"p", a.p}, {"nu", nu}, {"coefficient", f.get_str()}, {"exact", true}}.dump(2) << "\n";
}

// ------------------------------------------------------------------ manifest

json collect_parameters(const CLI::App* app) {
    json params = json::object();
    for (const CLI::Option* opt : app->get_options()) {
        std::string name = !opt->get_lnames().empty()   ? opt->get_lnames().front()
                           : !opt->get_snames().empty() ? opt->get_snames().front()
                                                        : opt->get_name();
        if (name == "help" || name == "h") continue;
        if (opt->count() > 0) {
            const auto& r = opt->results();
            params[name] = r.size() == 1 ? json(r.front()) : json(r);
        } else if (!opt->get_default_str().empty()) {
            params[name] = opt->get_default_str();
        }
    }
    for (const CLI::App* sub : app->get_subcommands()) params[sub->get_name()] = collect_parameters(sub);
    return params;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cotype zeta functions of Z^d: sublattice tallies, densities, identity checks and sampling."};
    app.name("cotype");
    app.require_subcommand(1);
    app.fallthrough();  // global options may follow the subcommand
    app.set_version_flag("--version", kToolVersion);
    std::string manifest_path, replay_path;
    app.add_option("--manifest", manifest_path, "Write the run manifest to this file instead of stderr");
    std::uint64_t max_matrices = 0;
    app.add_option("--max-matrices", max_matrices,
                   "Enumeration cap (default from COTYPE_MAX_MATRICES, else 100000000)");

    // tally
    TallyArgs tally;
    auto* t = app.add_subcommand("tally",
                                 "Count sublattices of Z^d of index strictly less than X (index < X), by cotype");
    t->add_option("-d", tally.d, "Dimension")->required()->check(CLI::Range(1, kMaxEnumerationDim));
    t->add_option("-X", tally.bound, "Strict index bound: only sublattices with index < X are counted")
        ->required()
        ->check(CLI::PositiveNumber);
    t->add_option("--format", tally.format, "Export format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    t->add_option("--out", tally.out_path, "Write the export here and print only the summary");
    t->add_option("--workers", tally.workers, "Threads (output does not depend on this)");

    // density
    DensityArgs dens;
    auto* de = app.add_subcommand("density", "Density of sublattices with corank at most m, as Euler products");
    de->add_option("-d", dens.d, "Dimension")->required()->check(CLI::PositiveNumber);
    de->add_option("-m", dens.m, "Corank bound, 1 <= m <= d")->required();
    de->add_option("--cutoff", dens.cutoff, "Largest prime in the truncated product")->capture_default_str();
    de->add_option("--spot-primes", dens.spot_primes, "Primes for exact local factors")->capture_default_str();
    de->add_option("--workers", dens.workers, "Threads (output does not depend on this)");

    // verify
    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "Check an identity suite exactly; exit code 3 on any failure");
    v->require_subcommand(1);
    v->add_flag("--inject-failure", ver.inject)->group("");
    auto* vq = v->add_subcommand("qident", "q-series identities behind the corank residue");
    vq->add_option("--n", ver.n)->capture_default_str();
    vq->add_option("--e", ver.e)->capture_default_str();
    vq->add_option("--d", ver.d, "Second identity for 1 <= i <= d <= this")->capture_default_str();
    auto* vd = v->add_subcommand("descent", "Three descent-polynomial methods agree");
    vd->add_option("--d", ver.d)->capture_default_str();
    auto* vo = v->add_subcommand("oracle", "Local coefficients against sublattice enumeration");
    vo->add_option("--d", ver.d)->required();
    vo->add_option("--p", ver.p)->capture_default_str();
    vo->add_option("--emax", ver.emax)->capture_default_str();
    auto* va = v->add_subcommand("autorder", "Automorphism orders by three methods");
    va->add_option("--p", ver.p)->capture_default_str();
    va->add_option("--max-exp", ver.max_exp, "Groups of order <= p^max-exp")->capture_default_str();
    auto* vz = v->add_subcommand("zidentity", "Random-matrix corank density against the Euler factor");
    vz->add_option("--d", ver.d)->capture_default_str();
    vz->add_option("--primes", ver.primes)->capture_default_str();
    for (auto* s : {vq, vd, vo, va, vz}) s->fallthrough();

    // simulate
    SimulateArgs sim;
    auto* s = app.add_subcommand("simulate", "Monte Carlo cokernel statistics against exact predictions");
    s->require_subcommand(1);
    auto* sm = s->add_subcommand("matrix", "d×d matrices with entries uniform on [−k, k]");
    auto* sl = s->add_subcommand("sublattice", "Uniform sublattices of index < X");
    for (auto* sub : {sm, sl}) {
        sub->add_option("-d", sim.cfg.d, "Dimension")->required();
        sub->add_option("-p", sim.cfg.p, "Prime")->capture_default_str();
        sub->add_option("-n,--trials", sim.cfg.trials, "Number of draws")->capture_default_str();
        sub->add_option("--seed", sim.cfg.seed, "Master seed")->capture_default_str();
        sub->add_option("--workers", sim.cfg.workers, "Threads (output does not depend on this)");
        sub->add_option("--stat", sim.stat, "Tabulate the p-rank or the p-Sylow type")
            ->check(CLI::IsMember({"rank", "type"}));
        sub->add_option("--cap", sim.cap, "Largest exponent kept as its own type")->capture_default_str();
        sub->add_option("--csv", sim.csv_path, "Also write raw counts as CSV");
    }
    sm->add_option("-k", sim.cfg.entry_bound, "Entry bound")->capture_default_str();
    sm->add_flag("--exhaustive", sim.cfg.exhaustive, "Visit all (2k+1)^(d²) matrices once");
    sl->add_option("-X", sim.cfg.index_bound, "Strict index bound")->required();

    // zeta
    ZetaArgs zeta;
    auto* z = app.add_subcommand("zeta", "Local factors and coefficients of the cotype zeta function");
    z->require_subcommand(1);
    z->add_option("-d", zeta.d, "Dimension")->required()->check(CLI::PositiveNumber);
    z->add_option("--format", zeta.format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();
    auto* zp = z->add_subcommand("print-local", "Print the local factor as a rational function");
    auto* zc = z->add_subcommand("coeff", "Number of sublattices with the given p-exponents");
    zc->add_option("-p", zeta.p, "Prime")->required();
    zc->add_option("--nu", zeta.nu, "Weakly decreasing exponents, comma separated")->required();
    for (auto* sub : {zp, zc}) sub->fallthrough();

    auto replay = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
    replay->add_option("manifest", replay_path)->required()->check(CLI::ExistingFile);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kUsage;
    }

    if (replay->parsed()) {
        std::ifstream f(replay_path);
        json m;
        try {
            m = json::parse(f);
        } catch (const json::exception& e) {
            err << "cannot read manifest: " << e.what() << "\n";
            return kUsage;
        }
        if (!m.contains("args") || !m["args"].is_array()) {
            err << "manifest has no recorded arguments\n";
            return kUsage;
        }
        std::vector<std::string> recorded = m["args"].get<std::vector<std::string>>();
        return cli::run(recorded, out, err);
    }

    Run r;
    if (max_matrices > 0) r.limits.max_matrices = max_matrices;
    const auto start = std::chrono::steady_clock::now();
    const CLI::App* leaf = app.get_subcommands().front();
    r.subcommand = leaf->get_name();
    while (!leaf->get_subcommands().empty()) {
        leaf = leaf->get_subcommands().front();
        r.subcommand += " " + leaf->get_name();
    }

    try {
        if (t->parsed()) {
            cmd_tally(tally, r);
        } else if (de->parsed()) {
            cmd_density(dens, r);
        } else if (v->parsed()) {
            cmd_verify(v->get_subcommands().front()->get_name(), ver, r, err);
        } else if (s->parsed()) {
            if (sim.cfg.workers == 0) sim.cfg.workers = default_workers();
            cmd_simulate(sm->parsed() ? SampleModel::matrix : SampleModel::sublattice, sim, r);
        } else if (z->parsed()) {
            cmd_zeta(zc->parsed() ? "coeff" : "print-local", zeta, r);
        }
    } catch (const ResourceLimit& e) {
        err << "resource limit: " << e.what() << "\n";
        r.code = kResourceLimit;
    } catch (const CapExceeded& e) {
        err << "cap exceeded: " << e.what() << "\n";
        r.code = kResourceLimit;
    } catch (const ArithmeticBug& e) {
        err << "internal arithmetic failure: " << e.what() << "\n";
        r.code = kVerificationFailure;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        r.code = kUsage;
    }

    const std::string primary = r.out.str();
    out << primary;
    out.flush();

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    json manifest;
    manifest["subcommand"] = r.subcommand;
    manifest["args"] = args;
    manifest["parameters"] = collect_parameters(&app);
    manifest["seed"] = r.seed ? json(*r.seed) : json(nullptr);
    manifest["caps"] = {{"max_matrices", r.limits.max_matrices}};
    manifest["tool_version"] = kToolVersion;
    manifest["wall_time_seconds"] = seconds;
    manifest["output_sha256"] = sha256_hex(primary);
    manifest["exit_code"] = r.code;
    if (manifest_path.empty()) {
        err << manifest.dump() << "\n";
    } else {
        std::ofstream f(manifest_path, std::ios::binary);
        if (!f) {
            err << "cannot write manifest " << manifest_path << "\n";
            return r.code == kSuccess ? kUsage : r.code;
        }
        f << manifest.dump(2) << "\n";
    }
    return r.code;
}

}  // namespace cotype::cli
