// cocycle-lab: command-line front end for the cocycle library.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cocycle/family_io.hpp"
#include "cocycle/presets.hpp"
#include "cocycle/regularity.hpp"
#include "cocycle/thouless.hpp"
#include "json.hpp"

using namespace cocycle;
using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// "0.5+0.5i", "-1+0.25i", "2i", "3", "-i"
cplx parse_complex(const std::string& s0) {
    std::string s;
    for (char c : s0)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw DomainError("empty complex number");
    auto num = [&](const std::string& x) -> double {
        if (x.empty() || x == "+") return 1.0;
        if (x == "-") return -1.0;
        size_t pos = 0;
        double v = std::stod(x, &pos);
        if (pos != x.size()) throw DomainError("malformed number '" + x + "'");
        return v;
    };
    try {
        if (s.back() != 'i' && s.back() != 'j') return {num(s), 0.0};
        std::string body = s.substr(0, s.size() - 1);
        // split at the last sign that is not part of an exponent and not leading
        for (size_t k = body.size(); k-- > 1;) {
            if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E')
                return {num(body.substr(0, k)), num(body.substr(k))};
        }
        return {0.0, num(body)};
    } catch (const std::logic_error&) {
        throw DomainError("malformed complex number '" + s0 + "' (use e.g. 0.5+0.5i)");
    }
}

// "lo:hi:count" or "t1,t2,..."
std::vector<double> parse_grid(const std::string& s) {
    try {
        if (s.find(':') != std::string::npos) {
            std::vector<std::string> p;
            std::stringstream ss(s);
            std::string x;
            while (std::getline(ss, x, ':')) p.push_back(x);
            if (p.size() != 3) throw DomainError("");
            long cnt = std::stol(p[2]);
            if (cnt < 2) throw DomainError("");
            return linspace(std::stod(p[0]), std::stod(p[1]), static_cast<size_t>(cnt));
        }
        std::vector<double> g;
        std::stringstream ss(s);
        std::string x;
        while (std::getline(ss, x, ',')) g.push_back(std::stod(x));
        if (g.empty()) throw DomainError("");
        return g;
    } catch (const std::exception&) {
        throw DomainError("malformed grid '" + s + "' (use lo:hi:count or a comma list)");
    }
}

std::vector<uint32_t> parse_word(const std::string& s, int kappa) {
    std::vector<uint32_t> w;
    std::stringstream ss(s);
    std::string x;
    try {
        while (std::getline(ss, x, ',')) {
            long v = std::stol(x);
            if (v < 0 || v >= kappa) throw DomainError("");
            w.push_back(static_cast<uint32_t>(v));
        }
    } catch (const std::exception&) {
        throw DomainError("malformed word '" + s + "' (comma separated symbols in [0, kappa))");
    }
    if (w.empty()) throw DomainError("empty word");
    return w;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string x;
    try {
        while (std::getline(ss, x, ',')) v.push_back(std::stoi(x));
    } catch (const std::exception&) {
        throw DomainError("malformed integer list '" + s + "'");
    }
    return v;
}

std::pair<double, double> parse_interval(const std::string& s) {
    auto g = parse_grid(s);
    if (g.size() != 2 || !(g[1] > g[0])) throw DomainError("interval must be 'lo,hi' with lo < hi");
    return {g[0], g[1]};
}

// ------------------------------------------------------------ output

struct Table {
    std::vector<std::string> cols;
    std::vector<std::vector<ojson>> rows;
};

std::string cell(const ojson& v) {
    if (v.is_number_float()) return g17(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

struct Common {
    std::string preset = "cd-n1";
    std::string family;
    uint64_t seed = 1;
    int workers = 0;
    std::string out;
    std::string format = "csv";
};

class Runner {
  public:
    Runner(CLI::App& app, Common& c) : app_(app), c_(c) {}

    AffineFamily family() const {
        if (!c_.family.empty()) {
            AffineFamily f = load_family(c_.family);
            if (f.bernoulli_base() && seed_given_) f.bernoulli.seed = c_.seed;
            // the echo must carry the seed actually used
            if (f.bernoulli_base()) resolved_seed_ = f.bernoulli.seed;
            return f;
        }
        return make_preset(c_.preset, c_.seed);
    }

    void note_seed(bool given) { seed_given_ = given; }

    // echo of the resolved configuration as a command line; --out and --workers do not change results
    std::string echo(const CLI::App* sub) const {
        std::string cmd = "cocycle-lab " + sub->get_name();
        auto add = [&](const CLI::App* a) {
            for (const CLI::Option* o : a->get_options()) {
                std::string n = o->get_name(false, true);
                if (n.empty() || n == "--help" || n == "-h" || n == "--out" || n == "--workers" || n == "--version")
                    continue;
                std::string lname = o->get_lnames().empty() ? n : "--" + o->get_lnames()[0];
                std::string val;
                if (o->count() > 0) {
                    auto r = o->results();
                    val = r.empty() ? "" : r.back();
                } else {
                    val = o->get_default_str();
                }
                if (val.empty()) continue;
                if (n == "--preset" && !c_.family.empty()) continue;
                if (n == "--seed" && resolved_seed_) val = std::to_string(*resolved_seed_);
                cmd += " " + lname + " " + val;
            }
        };
        add(&app_);
        add(sub);
        return cmd;
    }

    void emit(const CLI::App* sub, const Table& t) {
        std::ostringstream os;
        os << "# cocycle-lab " << COCYCLE_VERSION << "\n";
        os << "# command: " << echo(sub) << "\n";
        if (c_.format == "jsonl") {
            for (const auto& r : t.rows) {
                ojson j;
                for (size_t i = 0; i < t.cols.size(); ++i) j[t.cols[i]] = r[i];
                os << j.dump() << "\n";
            }
        } else {
            for (size_t i = 0; i < t.cols.size(); ++i) os << (i ? "," : "") << t.cols[i];
            os << "\n";
            for (const auto& r : t.rows) {
                for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell(r[i]);
                os << "\n";
            }
        }
        write(sub, os.str(), c_.format == "jsonl" ? "jsonl" : "csv");
    }

    void emit_raw(const CLI::App* sub, const std::string& body, const std::string& ext) {
        std::ostringstream os;
        os << "# cocycle-lab " << COCYCLE_VERSION << "\n";
        os << "# command: " << echo(sub) << "\n";
        os << body;
        write(sub, os.str(), ext);
    }

    std::string out_path(const CLI::App* sub, const std::string& ext) const {
        if (!c_.out.empty()) return c_.out;
        const char* env = std::getenv("COCYCLE_LAB_OUT");
        if (env && *env) return std::string(env) + "/" + sub->get_name() + "." + ext;
        return "";
    }

  private:
    void write(const CLI::App* sub, const std::string& s, const std::string& ext) {
        std::string p = out_path(sub, ext);
        if (p.empty()) {
            std::cout << s;
            return;
        }
        std::ofstream f(p, std::ios::binary);
        if (!f) throw DomainError("cannot write output file '" + p + "'");
        f << s;
        std::cerr << "wrote " << p << "\n";
    }

    CLI::App& app_;
    Common& c_;
    bool seed_given_ = false;
    mutable std::optional<uint64_t> resolved_seed_;
};

Table kv_table(const std::vector<std::pair<std::string, ojson>>& kv) {
    Table t;
    t.cols = {"key", "value"};
    for (const auto& [k, v] : kv) t.rows.push_back({k, v});
    return t;
}

// single-record output: csv as key,value rows, jsonl as one object
void emit_record(Runner& run, const CLI::App* sub, const Common& c,
                 const std::vector<std::pair<std::string, ojson>>& kv) {
    if (c.format == "jsonl") {
        Table t;
        for (const auto& [k, v] : kv) t.cols.push_back(k);
        std::vector<ojson> row;
        for (const auto& [k, v] : kv) row.push_back(v);
        t.rows.push_back(row);
        run.emit(sub, t);
    } else {
        run.emit(sub, kv_table(kv));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cocycle-lab: affine families of 2x2 cocycles, Thouless identity and regularity probes"};
    app.set_version_flag("--version", std::string(COCYCLE_VERSION));
    app.require_subcommand(1);
    Common c;
    app.add_option("--preset", c.preset, "preset family")->capture_default_str();
    app.add_option("--family", c.family, "family file (JSON); overrides --preset");
    auto* seed_opt = app.add_option("--seed", c.seed, "base seed")->capture_default_str();
    app.add_option("--workers", c.workers, "worker threads (0: hardware)")->capture_default_str();
    app.add_option("--out", c.out, "output file (default: $COCYCLE_LAB_OUT/<cmd>.<ext> or stdout)");
    app.add_option("--format", c.format, "csv or jsonl")->check(CLI::IsMember({"csv", "jsonl"}))->capture_default_str();
    app.fallthrough();

    Runner run(app, c);

    // check-assumptions
    auto* ca = app.add_subcommand("check-assumptions", "validate invertibility, winding, dominated splitting, c*");
    double ca_lo = -3, ca_hi = 3;
    int ca_t = 101;
    ca->add_option("--J-lo", ca_lo)->capture_default_str();
    ca->add_option("--J-hi", ca_hi)->capture_default_str();
    ca->add_option("--t-points", ca_t)->capture_default_str();

    // lyapunov
    auto* ly = app.add_subcommand("lyapunov", "L1(A_t) by renormalized iteration");
    std::string ly_t = "0";
    size_t ly_n = 10000, ly_s = 100, ly_burn = 256;
    ly->add_option("--t", ly_t, "parameter, complex allowed (e.g. 0.5+0.5i)")->capture_default_str();
    ly->add_option("--n", ly_n)->capture_default_str();
    ly->add_option("--samples", ly_s)->capture_default_str();
    ly->add_option("--burn", ly_burn)->capture_default_str();

    // rotation
    auto* ro = app.add_subcommand("rotation", "relative fibered rotation number on a t grid");
    std::string ro_grid = "-3:3:61", ro_conv = "polar";
    size_t ro_n = 10000, ro_s = 50;
    ro->add_option("--t-grid", ro_grid)->capture_default_str();
    ro->add_option("--n", ro_n)->capture_default_str();
    ro->add_option("--samples", ro_s)->capture_default_str();
    ro->add_option("--convention", ro_conv)->check(CLI::IsMember({"polar", "circle", "halfturn"}))->capture_default_str();

    // drho
    auto* dr = app.add_subcommand("drho", "the measure d rho, from roots or from rotation increments");
    std::string dr_route = "rotation", dr_grid = "-6:6:601";
    size_t dr_n = 1000, dr_s = 50;
    dr->add_option("--route", dr_route)->check(CLI::IsMember({"roots", "rotation"}))->capture_default_str();
    dr->add_option("--t-grid", dr_grid, "rotation route grid")->capture_default_str();
    dr->add_option("--n", dr_n)->capture_default_str();
    dr->add_option("--samples", dr_s)->capture_default_str();

    // thouless
    auto* th = app.add_subcommand("thouless", "residual L1(A_t) - L1(B) - int log|t-s| d rho(s)");
    std::string th_t = "0.5+0.5i", th_route = "rotation";
    size_t th_n = 10000, th_s = 400, th_rn = 0, th_rs = 0;
    double th_delta = 1e-3, th_step = 0.02;
    th->add_option("--t", th_t)->capture_default_str();
    th->add_option("--n", th_n)->capture_default_str();
    th->add_option("--samples", th_s)->capture_default_str();
    th->add_option("--route", th_route)->check(CLI::IsMember({"roots", "rotation"}))->capture_default_str();
    th->add_option("--roots-n", th_rn, "roots route degree (0: min(n, 1000))")->capture_default_str();
    th->add_option("--roots-samples", th_rs, "roots route words (0: samples)")->capture_default_str();
    th->add_option("--delta", th_delta, "imaginary offset for real t")->capture_default_str();
    th->add_option("--grid-step", th_step, "rotation route cell width")->capture_default_str();

    // roots
    auto* rt = app.add_subcommand("roots", "roots of <A_t^n v, w> for one word");
    std::string rt_word;
    size_t rt_n = 20;
    uint64_t rt_stream = 0;
    double rt_v = 0, rt_w = 0;
    rt->add_option("--word", rt_word, "symbols, comma separated (default: sampled)");
    rt->add_option("--n", rt_n, "sampled word length")->capture_default_str();
    rt->add_option("--stream", rt_stream, "sampled word stream")->capture_default_str();
    rt->add_option("--v-angle", rt_v)->capture_default_str();
    rt->add_option("--w-angle", rt_w)->capture_default_str();

    // log-concavity
    auto* lc = app.add_subcommand("log-concavity", "log-concavity margin of <A_t^n v, w>");
    std::string lc_word;
    size_t lc_n = 20;
    uint64_t lc_stream = 0;
    double lc_v = 0, lc_w = 0;
    lc->add_option("--word", lc_word);
    lc->add_option("--n", lc_n)->capture_default_str();
    lc->add_option("--stream", lc_stream)->capture_default_str();
    lc->add_option("--v-angle", lc_v)->capture_default_str();
    lc->add_option("--w-angle", lc_w)->capture_default_str();

    // trace-roots
    auto* tr = app.add_subcommand("trace-roots", "roots of tr A_t^n and its interior extrema");
    std::string tr_word;
    size_t tr_n = 20;
    uint64_t tr_stream = 0;
    tr->add_option("--word", tr_word);
    tr->add_option("--n", tr_n)->capture_default_str();
    tr->add_option("--stream", tr_stream)->capture_default_str();

    // matchings
    auto* ma = app.add_subcommand("matchings", "gamma-matching events (event log as JSON lines)");
    double ma_gamma = 2;
    int ma_k = 8;
    std::string ma_J = "-1,1", ma_replay;
    size_t ma_s = 0;
    ma->add_option("--gamma", ma_gamma)->capture_default_str();
    ma->add_option("--k", ma_k)->capture_default_str();
    ma->add_option("--J", ma_J)->capture_default_str();
    ma->add_option("--samples", ma_s, "Monte Carlo words (0: exhaustive)")->capture_default_str();
    ma->add_option("--replay", ma_replay, "recertify the events of an event log");

    // drho-bound
    auto* db = app.add_subcommand("drho-bound", "check d rho(J_delta) >= mu(Sigma)/k");
    double db_gamma = 2;
    int db_k = 8;
    std::string db_J = "-1,1";
    size_t db_n = 10000, db_s = 100, db_ms = 0;
    db->add_option("--gamma", db_gamma)->capture_default_str();
    db->add_option("--k", db_k)->capture_default_str();
    db->add_option("--J", db_J)->capture_default_str();
    db->add_option("--n", db_n)->capture_default_str();
    db->add_option("--samples", db_s)->capture_default_str();
    db->add_option("--match-samples", db_ms, "Monte Carlo words (0: exhaustive)")->capture_default_str();

    // holder
    auto* ho = app.add_subcommand("holder", "dyadic ratio probe |rho(t0+h) - rho(t0)| / h^alpha");
    double ho_t0 = 0, ho_alpha = 0.5, ho_rel = 0;
    std::string ho_scales = "6,7,8,9,10";
    size_t ho_n = 100000, ho_s = 64;
    ho->add_option("--t0", ho_t0)->capture_default_str();
    ho->add_option("--alpha", ho_alpha)->capture_default_str();
    ho->add_option("--alpha-rel", ho_rel, "if > 0, alpha = alpha-rel * H(mu)/L1")->capture_default_str();
    ho->add_option("--scales", ho_scales)->capture_default_str();
    ho->add_option("--n", ho_n)->capture_default_str();
    ho->add_option("--samples", ho_s)->capture_default_str();

    // log-holder
    auto* lh = app.add_subcommand("log-holder", "smallest C with |rho(t) - rho(s)| <= C / log(1/|t-s|)");
    std::string lh_grid = "-3:3:121";
    size_t lh_n = 10000, lh_s = 50;
    double lh_C = -1;
    lh->add_option("--t-grid", lh_grid)->capture_default_str();
    lh->add_option("--n", lh_n)->capture_default_str();
    lh->add_option("--samples", lh_s)->capture_default_str();
    lh->add_option("--C", lh_C, "count violations of this constant (< 0: off)")->capture_default_str();

    // tangency
    auto* ta = app.add_subcommand("tangency", "heteroclinic tangency search C u(B) = s(A)");
    double ta_t0 = 0;
    int ta_len = 6;
    ta->add_option("--t0", ta_t0)->capture_default_str();
    ta->add_option("--max-len", ta_len)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }
    run.note_seed(seed_opt->count() > 0);

    try {
        if (!c.family.empty() && app.get_option("--preset")->count() > 0)
            throw DomainError("use either --preset or --family, not both");
        AffineFamily f = run.family();
        const CLI::App* sub = app.get_subcommands().front();
        auto sampled_word = [&](const std::string& w, size_t n, uint64_t stream) {
            if (!w.empty()) return parse_word(w, f.kappa());
            if (!f.bernoulli_base()) throw DomainError("words need a Bernoulli base");
            return sample_orbit(f.bernoulli, stream, n);
        };

        if (sub == ca) {
            AssumptionOptions ao;
            ao.J_lo = ca_lo;
            ao.J_hi = ca_hi;
            ao.t_points = ca_t;
            AssumptionReport r = check_assumptions(f, ao);
            std::string classes;
            for (const auto& w : r.winding.classes) classes += std::string(classes.empty() ? "" : ";") + to_string(w.tag);
            emit_record(run, sub, c,
                        {{"invertibility", r.invertibility.holds},
                         {"strip_R", r.invertibility.strip_R},
                         {"det_floor_c", r.invertibility.det_floor_c},
                         {"winding_sign", r.winding.sign},
                         {"winding_classes", classes},
                         {"affine", r.affine},
                         {"dominated_splitting", r.dominated_splitting.holds},
                         {"rank1", r.dominated_splitting.rank1},
                         {"chain_floor", r.dominated_splitting.chain_nonvanishing_floor},
                         {"c_star", r.strict_winding.c_star},
                         {"n0", r.strict_winding.n0},
                         {"certified", r.certified},
                         {"all_hold", r.all_hold()}});
        } else if (sub == ly) {
            McOptions mo;
            mo.workers = c.workers;
            mo.burn = ly_burn;
            cplx t = parse_complex(ly_t);
            ScalarEstimate e = lyapunov(f, t, ly_n, ly_s, mo);
            emit_record(run, sub, c,
                        {{"t_re", t.real()}, {"t_im", t.imag()}, {"L1", e.value}, {"std_error", e.std_error},
                         {"n", e.n_steps}, {"samples", e.n_samples}});
        } else if (sub == ro) {
            RotationOptions o;
            o.workers = c.workers;
            o.convention = parse_convention(ro_conv);
            auto grid = parse_grid(ro_grid);
            RhoGrid g = rotation_grid(f, grid, ro_n, ro_s, o);
            Table t;
            t.cols = {"t", "rho_rel", "rel_se"};
            for (size_t i = 0; i < grid.size(); ++i) t.rows.push_back({grid[i], g.rel(i), g.rel_se[i]});
            run.emit(sub, t);
        } else if (sub == dr) {
            EmpiricalMeasure1D m;
            if (dr_route == "roots") {
                m = drho_from_roots(f, dr_n, dr_s, {1, 0}, {1, 0}, c.workers).measure;
            } else {
                RotationOptions o;
                o.workers = c.workers;
                m = drho_from_rotation(f, parse_grid(dr_grid), dr_n, dr_s, o).measure;
            }
            run.emit_raw(sub, measure_to_text(m), "txt");
        } else if (sub == th) {
            ThoulessOptions o;
            o.n = th_n;
            o.samples = th_s;
            o.source = th_route == "roots" ? DrhoSource::Roots : DrhoSource::Rotation;
            o.roots_n = th_rn;
            o.roots_samples = th_rs;
            o.delta = th_delta;
            o.grid_step = th_step;
            o.workers = c.workers;
            ThoulessReport r = thouless_residual(f, parse_complex(th_t), o);
            if (c.format == "jsonl") {
                auto j = nlohmann::json::parse(report_to_json(r));
                run.emit_raw(sub, j.dump() + "\n", "jsonl");
            } else {
                run.emit_raw(sub, report_to_kv(r), "txt");
            }
        } else if (sub == rt) {
            auto w = sampled_word(rt_word, rt_n, rt_stream);
            RootsResult r = roots_of_entry(f, w, dir(rt_v), dir(rt_w));
            Table t;
            t.cols = {"k", "root"};
            for (size_t i = 0; i < r.roots.size(); ++i) t.rows.push_back({i, r.roots[i]});
            run.emit(sub, t);
        } else if (sub == lc) {
            auto w = sampled_word(lc_word, lc_n, lc_stream);
            LogConcavity r = log_concavity_check(f, w, dir(lc_v), dir(lc_w));
            emit_record(run, sub, c, {{"min_defect", r.min_defect}, {"pass", r.pass}, {"checked", r.checked}});
        } else if (sub == tr) {
            auto w = sampled_word(tr_word, tr_n, tr_stream);
            TraceRoots r = trace_roots(f, w);
            Table t;
            t.cols = {"kind", "t"};
            for (double x : r.roots) t.rows.push_back({"root", x});
            for (double x : r.extrema) t.rows.push_back({"extremum", x});
            t.rows.push_back({"min_abs_extremum", r.min_abs_extremum});
            t.rows.push_back({"min_abs_derivative", r.min_abs_derivative});
            t.rows.push_back({"extrema_outside", r.extrema_outside ? "true" : "false"});
            run.emit(sub, t);
        } else if (sub == ma) {
            if (!ma_replay.empty()) {
                std::ifstream in(ma_replay);
                if (!in) throw DomainError("cannot open event log '" + ma_replay + "'");
                std::string line;
                long ok = 0, bad = 0;
                while (std::getline(in, line)) {
                    if (line.empty() || line[0] == '#') continue;
                    if (recertify(f, event_from_json_line(line))) ++ok; else ++bad;
                }
                emit_record(run, sub, c, {{"recertified", ok}, {"failed", bad}});
                return bad == 0 ? 0 : kExitNumerical;
            }
            auto [lo, hi] = parse_interval(ma_J);
            MatchingOptions mo;
            mo.exhaustive = ma_s == 0;
            mo.samples = ma_s;
            mo.workers = c.workers;
            MatchingResult r = detect_matchings(f, ma_gamma, ma_k, lo, hi, mo);
            std::string body = "# mu_sigma " + g17(r.mu_sigma) + " se " + g17(r.se) + " words " +
                               std::to_string(r.words) + " t_step " + g17(r.t_step) + " c_star " + g17(r.c_star) +
                               "\n";
            for (const auto& e : r.events) body += event_to_json_line(e) + "\n";
            run.emit_raw(sub, body, "jsonl");
        } else if (sub == db) {
            auto [lo, hi] = parse_interval(db_J);
            MatchingOptions mo;
            mo.exhaustive = db_ms == 0;
            mo.samples = db_ms;
            mo.workers = c.workers;
            DrhoBound r = drho_lower_bound_check(f, db_gamma, db_k, lo, hi, db_n, db_s, mo);
            emit_record(run, sub, c,
                        {{"lhs", r.lhs}, {"lhs_se", r.lhs_se}, {"rhs", r.rhs}, {"rhs_se", r.rhs_se},
                         {"delta", r.delta}, {"c_star", r.c_star}, {"events", r.events}, {"pass", r.pass}});
        } else if (sub == ho) {
            HolderOptions o;
            o.n = ho_n;
            o.samples = ho_s;
            o.workers = c.workers;
            double alpha = ho_alpha;
            if (ho_rel > 0) {
                McOptions mc;
                mc.workers = c.workers;
                double l1 = lyapunov(f, ho_t0, o.l1_n, o.l1_samples, mc).value;
                double h = f.bernoulli_base() ? entropy(f.bernoulli) : 0.0;
                alpha = ho_rel * h / l1;
            }
            HolderProbeReport r = holder_probe(f, ho_t0, alpha, parse_ints(ho_scales), o);
            Table t;
            t.cols = {"h", "drho", "ratio"};
            for (const auto& x : r.ratios) t.rows.push_back({x.h, x.drho, x.ratio});
            std::string head = "# alpha " + g17(r.alpha) + " threshold " + g17(r.threshold) + " entropy " +
                               g17(r.entropy) + " L1 " + g17(r.l1) + " growth " + g17(r.max_ratio_growth) +
                               " max_over_first " + g17(r.max_over_first) + "\n";
            std::ostringstream os;
            os << head << "h,drho,ratio\n";
            for (const auto& x : r.ratios) os << g17(x.h) << "," << g17(x.drho) << "," << g17(x.ratio) << "\n";
            run.emit_raw(sub, os.str(), "csv");
        } else if (sub == lh) {
            RotationOptions o;
            o.workers = c.workers;
            LogHolderReport r = log_holder_check(f, parse_grid(lh_grid), lh_n, lh_s, lh_C, o);
            emit_record(run, sub, c, {{"C_estimate", r.C_estimate}, {"violations", r.violations}, {"pairs", r.pairs}});
        } else if (sub == ta) {
            auto r = tangency_finder(f, ta_t0, ta_len);
            auto wstr = [](const std::vector<uint32_t>& w) {
                std::string s;
                for (auto x : w) s += (s.empty() ? "" : " ") + std::to_string(x);
                return s;
            };
            if (!r) {
                emit_record(run, sub, c, {{"found", false}, {"hyperbolic_words", 0}});
            } else {
                emit_record(run, sub, c,
                            {{"found", r->found},
                             {"distance", r->distance},
                             {"B", wstr(r->B)},
                             {"C", wstr(r->C)},
                             {"A", wstr(r->A)},
                             {"hyperbolic_words", r->hyperbolic_words},
                             {"shared_direction", r->shared_direction}});
            }
        }
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
    return 0;
}
