// Acceptance gate: one PASS/FAIL line per criterion, exit 0 iff all pass.
// Every bound below is pinned here and checked against max_dev directly, so a
// looser tolerance inside a suite cannot make a criterion pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "dbc/cli.hpp"

using namespace dbc;

namespace {

constexpr std::uint64_t kSeed = 42;
constexpr double kExact = 0.0;

struct Bound {
    std::string id;
    double bound;
    int min_samples;
};

class Gate {
public:
    void require(const CheckReport& r, double bound, int min_samples) {
        ++checks_;
        worst_ = std::max(worst_, bound > 0 ? r.max_dev / bound : (r.max_dev > 0 ? INFINITY : 0.0));
        if (r.invalid || r.samples < min_samples || !(r.max_dev <= bound)) {
            std::ostringstream os;
            os << r.id << "[" << r.u << "," << r.v << "] n=" << r.n << " dev=" << r.max_dev << " bound=" << bound
               << " samples=" << r.samples << "/" << min_samples << (r.invalid ? " invalid: " + r.note : "");
            fail(os.str());
        }
    }
    void require(const std::vector<CheckReport>& reports, const std::vector<Bound>& bounds) {
        for (const auto& s : bounds) {
            int hits = 0;
            for (const auto& r : reports)
                if (r.id == s.id) {
                    require(r, s.bound, s.min_samples);
                    ++hits;
                }
            if (hits == 0) fail("no report for " + s.id);
        }
    }
    void expect(bool ok, const std::string& what) {
        ++checks_;
        if (!ok) fail(what);
    }
    void fail(const std::string& why) {
        if (failures_.size() < 5) failures_.push_back(why);
        ++failed_;
    }
    bool ok() const { return failed_ == 0; }
    std::string summary() const {
        std::ostringstream os;
        os << checks_ << " checks";
        if (checks_ > 0 && worst_ > 0) os << ", worst dev/bound " << worst_;
        if (failed_) os << ", " << failed_ << " failed";
        return os.str();
    }
    const std::vector<std::string>& failures() const { return failures_; }

private:
    int checks_ = 0, failed_ = 0;
    double worst_ = 0;
    std::vector<std::string> failures_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<CheckReport> timed_suite(const std::string& name, int n, int samples, double& secs) {
    RunConfig cfg;
    cfg.n = n;
    cfg.seed = kSeed;
    cfg.samples = samples;
    const auto t0 = std::chrono::steady_clock::now();
    auto r = run_suite(name, cfg);
    secs += seconds_since(t0);
    return r;
}

std::set<std::string> labels(const std::vector<CheckReport>& rs, const std::string& id, bool pair) {
    std::set<std::string> s;
    for (const auto& r : rs)
        if (r.id == id) s.insert(pair ? r.u + "|" + r.v : r.v);
    return s;
}

std::set<std::string> all_cells(int n, bool pair) {
    std::set<std::string> s;
    for (const auto& [u, v] : suite_pairs(n, kSeed)) s.insert(pair ? u.str() + "|" + v.str() : v.str());
    return s;
}

int factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

int g_failed = 0;

void line(int k, const std::string& title, const Gate& g, const std::string& timing) {
    std::printf("%s [%d] %s: %s%s\n", g.ok() ? "PASS" : "FAIL", k, title.c_str(), g.summary().c_str(), timing.c_str());
    for (const auto& f : g.failures()) std::printf("       %s\n", f.c_str());
    if (!g.ok()) ++g_failed;
    std::fflush(stdout);
}

std::string timing(double secs, double limit) {
    char buf[96];
    if (limit > 0) std::snprintf(buf, sizeof buf, " (%.2f s, limit %.0f s)", secs, limit);
    else std::snprintf(buf, sizeof buf, " (%.2f s)", secs);
    return buf;
}

}  // namespace

int main() {
    // 1. SL(2) coordinate brackets
    {
        Gate g;
        const auto t0 = std::chrono::steady_clock::now();
        const auto rs = golden_sl2_brackets(kSeed, 20);
        const double secs = seconds_since(t0);
        for (const auto& r : rs) g.require(r, 1e-9, 20);
        g.expect(rs.size() == 6, "six brackets");
        g.expect(secs < 1.0, "runtime under 1 s");
        line(1, "SL(2) coordinate brackets at 20 points", g, timing(secs, 1));
    }

    // 2. SL(2) groupoid tables
    {
        Gate g;
        const auto rs = golden_sl2_groupoid(kSeed, 20);
        for (const auto& r : rs) g.require(r, 1e-9, 20);
        for (const char* id : {"golden.sl2.chart.chi", "golden.sl2.chart.source", "golden.sl2.chart.target",
                               "golden.sl2.chart.inverse", "golden.sl2.chart.identity", "golden.sl2.chart.mul",
                               "golden.sl2.leaf.inverse", "golden.sl2.leaf.mul"})
            g.expect(!labels(rs, id, false).empty(), std::string("present: ") + id);
        line(2, "SL(2) groupoid maps in the (z,a,b) and (p,q,t) charts", g, "");
    }

    // 3. SL(3) worked example
    {
        Gate g;
        const auto rs = golden_sl3(kSeed, 20);
        for (const auto& r : rs) g.require(r, 1e-8, r.id == "golden.sl3.leaf.representative" ? 1 : 20);
        g.expect(!labels(rs, "golden.sl3.flag_bracket", false).empty(), "flag bracket present");
        g.expect(!labels(rs, "golden.sl3.leaf.mul", false).empty(), "six-variable product present");
        line(3, "SL(3) flag bracket and leaf groupoid product", g, "");
    }

    // 4, 5, 7 share the n = 2, 3 poisson and groupoid runs
    std::map<int, std::vector<CheckReport>> poisson, groupoid;
    double t_n3 = 0, scratch = 0;
    for (int n : {2, 3}) {
        double& t = n == 3 ? t_n3 : scratch;
        poisson[n] = timed_suite("poisson", n, 25, t);
        groupoid[n] = timed_suite("groupoid", n, 25, t);
    }

    {
        Gate g;
        for (int n : {2, 3}) {
            g.require(poisson[n], {{"poisson.embedding_I", 1e-8, 20},
                                   {"poisson.projection_q", 1e-8, 20},
                                   {"poisson.Phi", 1e-8, 20},
                                   {"poisson.twist", 1e-8, 20}});
            g.require(groupoid[n], {{"groupoid.structure_push", 1e-8, 20}});
            for (const char* id : {"poisson.embedding_I", "poisson.projection_q", "poisson.Phi"})
                g.expect(labels(poisson[n], id, false) == all_cells(n, false),
                         std::string(id) + " covers every v at n=" + std::to_string(n));
            g.expect(labels(groupoid[n], "groupoid.structure_push", false) == all_cells(n, false),
                     "structure_push covers every v at n=" + std::to_string(n));
            g.expect(labels(poisson[n], "poisson.twist", true) == all_cells(n, true),
                     "twist covers every pair at n=" + std::to_string(n));
        }
        g.expect(t_n3 < 30.0, "runtime under 30 s at n=3");
        line(4, "Poisson and anti-Poisson maps for every v, n = 2, 3", g, timing(t_n3, 30));
    }

    {
        Gate g;
        for (int n : {2, 3})
            g.require(groupoid[n], {{"groupoid.associativity", 1e-9, 50},
                                    {"groupoid.identity", 1e-9, 50},
                                    {"groupoid.inverse", 1e-9, 50},
                                    {"groupoid.source_target", 1e-9, 50},
                                    {"groupoid.action.associativity", 1e-9, 50},
                                    {"groupoid.action.inverse", 1e-9, 50},
                                    {"groupoid.actions.commute", 1e-9, 50}});
        double t4 = 0;
        const auto smoke = timed_suite("groupoid", 4, 5, t4);
        for (const auto& r : smoke) g.require(r, r.tol, 1);
        g.expect(t4 < 120.0, "n=4 smoke run under 2 min");
        line(5, "groupoid axioms (50 triples, n <= 3) and n = 4 smoke run", g, timing(t4, 120));
    }

    {
        Gate g;
        double secs = 0;
        for (int n : {2, 3, 4}) {
            const auto rs = timed_suite("leaves", n, n == 4 ? 5 : 25, secs);
            const int min_s = n == 4 ? 5 : 20;
            g.require(rs, {{"leaves.casimir.minors", 1e-8, min_s},
                           {"leaves.casimir.chi", 1e-8, min_s},
                           {"leaves.square_identity", 1e-8, min_s},
                           {"leaves.rank", kExact, min_s},
                           {"leaves.count", kExact, 1},
                           {"leaves.sigma.rank", kExact, min_s},
                           {"leaves.sigma.left_action", 1e-8, min_s},
                           {"leaves.sigma.right_action", 1e-8, min_s}});
            const auto pairs = labels(rs, "leaves.count", true);
            if (n <= 3)
                g.expect(static_cast<int>(pairs.size()) == factorial(n) * factorial(n), "all pairs at n=" + std::to_string(n));
            else
                g.expect(pairs.size() == 10, "ten pairs at n=4");
        }
        line(6, "leaf Casimirs, square identity, ranks, actions and counts", g, timing(secs, 0));
    }

    {
        Gate g;
        for (int n : {2, 3})
            g.require(poisson[n], {{"poisson.multiplicativity", 1e-9, 100},
                                   {"poisson.jacobi", 1e-7, 1},
                                   {"poisson.ad_invariance", 1e-10, 20},
                                   {"poisson.coisotropy_C", 1e-8, 20},
                                   {"poisson.weak_pair", 1e-8, 20},
                                   {"poisson.dressing", 1e-9, 20},
                                   {"poisson.dressing_span", kExact, 20}});
        line(7, "multiplicativity, Jacobi, Ad-invariance, coisotropy, weak pair, dressing", g, "");
    }

    {
        Gate g;
        const char* argv[] = {"dbc", "verify", "--suite", "all", "--n", "3", "--seed", "42"};
        std::string text[2];
        int codes[2];
        const auto t0 = std::chrono::steady_clock::now();
        for (int k = 0; k < 2; ++k) {
            std::ostringstream os;
            codes[k] = run_cli(8, argv, os);
            nlohmann::json j = nlohmann::json::parse(os.str());
            j.erase("generated_at");
            text[k] = j.dump();
        }
        g.expect(text[0] == text[1], "reports identical modulo generated_at");
        g.expect(codes[0] == kExitPass && codes[1] == kExitPass, "baseline run passes");
        line(8, "verify --suite all --n 3 --seed 42 is deterministic", g, timing(seconds_since(t0), 0));
    }

    std::printf("%s: %d criteria failed\n", g_failed ? "FAIL" : "PASS", g_failed);
    return g_failed ? 1 : 0;
}
