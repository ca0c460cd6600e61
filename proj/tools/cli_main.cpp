// theta-forge command line driver: every verification and evaluator of the
// library as a subcommand emitting JSON/CSV.
//
// exit codes: 0 pass, 1 usage/input error, 2 tolerance failure, 3 convergence failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "thetaforge/checks.hpp"
#include "thetaforge/cst.hpp"
#include "thetaforge/gram.hpp"
#include "thetaforge/parallel.hpp"
#include "thetaforge/periods.hpp"
#include "thetaforge/serialize.hpp"
#include "thetaforge/su2.hpp"

using namespace thetaforge;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitUsage = 1;
constexpr int kExitTolerance = 2;
constexpr int kExitConvergence = 3;

// JSON config files reuse the flag names, scoped by subcommand:
//   { "gram": { "n": 3, "tau": "0+1i" } }
class ConfigJSON : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        json j;
        for (const CLI::Option* opt : app->get_options({})) {
            if (!opt->get_lnames().empty() && opt->get_configurable()) {
                std::string name = opt->get_lnames()[0];
                if (opt->reduced_results().size() == 1)
                    j[name] = opt->reduced_results().at(0);
                else if (default_also && !opt->get_default_str().empty())
                    j[name] = opt->get_default_str();
            }
        }
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        input >> j;
        return walk(j, {});
    }

private:
    static std::vector<CLI::ConfigItem> walk(const json& j, std::vector<std::string> prefix) {
        std::vector<CLI::ConfigItem> out;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (it.value().is_object()) {
                auto deeper = prefix;
                deeper.push_back(it.key());
                auto sub = walk(it.value(), deeper);
                out.insert(out.end(), sub.begin(), sub.end());
            } else {
                CLI::ConfigItem item;
                item.name = it.key();
                item.parents = prefix;
                if (it.value().is_string())
                    item.inputs = {it.value().get<std::string>()};
                else
                    item.inputs = {it.value().dump()};
                out.push_back(item);
            }
        }
        return out;
    }
};

void write_text(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << "\n";
        return;
    }
    std::ofstream os(path);
    if (!os) throw Error("cannot open output file " + path);
    os << content;
}

struct CommonOpts {
    std::string output;
    std::string format = "json";
    int threads = 0;
    unsigned seed = 20240801;

    void attach(CLI::App* cmd) {
        cmd->add_option("--output,-o", output, "output path ('-' or empty for stdout)");
        cmd->add_option("--format", format, "json or csv")
            ->check(CLI::IsMember({"json", "csv"}));
        cmd->add_option("--threads", threads, "worker threads (0 = hardware default)")
            ->envname("THETA_FORGE_THREADS");
        cmd->add_option("--seed", seed, "seed for sample points");
    }
    void apply() const { par::set_threads(threads); }
};

std::vector<long long> parse_labels(const std::string& s) {
    std::vector<long long> out;
    std::string cur;
    for (char c : s + ",") {
        if (c == ',' || c == ' ') {
            if (!cur.empty()) out.push_back(std::stoll(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    return out;
}

int cmd_verlinde(int n_min, int n_max, long long k_min, long long k_max, const CommonOpts& common) {
    auto rows = verlinde_table(n_min, n_max, k_min, k_max);
    bool all = true;
    for (const auto& r : rows) all = all && r.match;
    if (common.format == "csv") {
        std::ostringstream os;
        os << "n,k,count,binomial,match\n";
        for (const auto& r : rows)
            os << r.n << "," << r.k << "," << r.count << "," << r.binom << ","
               << (r.match ? "true" : "false") << "\n";
        write_text(common.output, os.str());
    } else {
        json j;
        j["schema"] = 1;
        j["rows"] = json::array();
        for (const auto& r : rows)
            j["rows"].push_back({{"n", r.n},
                                 {"k", r.k},
                                 {"count", r.count},
                                 {"binomial", r.binom},
                                 {"match", r.match}});
        j["all_match"] = all;
        write_text(common.output, j.dump(2));
    }
    return all ? kExitPass : kExitTolerance;
}

struct GramOpts {
    int n = 3;
    long long k = 1;
    std::string tau = "0+1i";
    int N = 0;
    double t = 0.0;
    double tolerance = 1e-6;
    bool abelian = false;
    int l = 1;
    std::string delta = "1";
    std::string omega_file;
    bool orbifold = false;
    std::string family = "integral";
};

int cmd_gram(const GramOpts& o, const CommonOpts& common) {
    cplx tau = parse_complex(o.tau);
    json j;
    j["schema"] = 1;
    GramReport rep;
    double expected_t = 0.0;
    try {
        if (o.abelian) {
            PolarizedTorus torus = [&] {
                if (!o.omega_file.empty()) {
                    std::ifstream is(o.omega_file);
                    if (!is) throw Error("cannot open " + o.omega_file);
                    json desc;
                    is >> desc;
                    return torus_from_json(desc);
                }
                Eigen::MatrixXcd om = Eigen::MatrixXcd::Identity(o.l, o.l) * cplx(0.0, 1.0);
                return PolarizedTorus(o.l, om, parse_labels(o.delta), o.k);
            }();
            auto labels = all_labels(torus);
            if (o.N > 0)
                rep = abelian_gram(torus, labels, o.N);
            else
                rep = gram_converged(
                    [&](int N) { return abelian_gram(torus, labels, N); },
                    QuadratureGrid::default_points(torus.l), o.tolerance);
            j["kind"] = "abelian";
        } else if (o.n == 2) {
            SU2Family fam = o.family == "half" ? SU2Family::half : SU2Family::integral;
            int N = o.N > 0 ? o.N : QuadratureGrid::default_points(1);
            rep = su2_gram(o.k, tau, N, fam, true, o.t, o.orbifold);
            expected_t = 2.0 / static_cast<double>(o.orbifold ? 2 * o.k + 3 : 2 * o.k + 4);
            j["kind"] = "su2";
        } else {
            RootSystem rs(o.n);
            EllipticModulus em(tau);
            expected_t = 1.0 / static_cast<double>(o.k + o.n);
            if (o.N > 0)
                rep = nonabelian_gram(rs, o.k, em, o.N, 1e-12, true, o.t);
            else
                rep = gram_converged(
                    [&](int N) { return nonabelian_gram(rs, o.k, em, N, 1e-12, true, o.t); },
                    QuadratureGrid::default_points(rs.rank()), o.tolerance);
            j["kind"] = "nonabelian";
            if (o.t > 0.0 && std::abs(o.t - expected_t) > 1e-12) {
                auto desc = fundamental_domain_independence(rs, o.k, em, o.t, 20, common.seed);
                j["descent_residual"] = desc.max();
                j["descent_tau_lattice"] = desc.max_tau_lattice;
            }
        }
    } catch (const ConvergenceError& e) {
        j["error"] = e.what();
        write_text(common.output, j.dump(2));
        return kExitConvergence;
    }
    j.update(gram_report_to_json(rep));
    if (o.t > 0.0 && expected_t > 0.0 && std::abs(o.t - expected_t) > 1e-12)
        j["t_detuned_from"] = expected_t;
    double dev = std::max(rep.max_diag_deviation, rep.max_offdiag);
    bool pass = dev <= o.tolerance;
    j["pass"] = pass;
    if (common.format == "csv") {
        std::ostringstream os;
        write_matrix_csv(os, rep.matrix);
        write_text(common.output, os.str());
    } else {
        write_text(common.output, j.dump(2));
    }
    return pass ? kExitPass : kExitTolerance;
}

struct EvalOpts {
    std::string kind = "theta";
    int n = 3;
    long long k = 1;
    std::string labels = "";
    std::string symmetry = "plain";
    std::string tau = "0+1i";
    std::string points_file;
    double tol = 1e-12;
    std::string bless_path;
};

int cmd_eval(const EvalOpts& o, const CommonOpts& common) {
    cplx tau = parse_complex(o.tau);
    RootSystem rs(o.n);
    const int l = rs.rank();

    std::vector<EvalPoint> points;
    if (o.points_file.empty() || o.points_file == "-") {
        points = parse_points(std::cin, l);
    } else {
        std::ifstream is(o.points_file);
        if (!is) throw Error("cannot open points file " + o.points_file);
        points = parse_points(is, l);
    }

    Weight lam{parse_labels(o.labels.empty() ? std::string(l, '0') : o.labels)};
    if (o.labels.empty()) lam = Weight(std::vector<long long>(l, 0));
    if (static_cast<int>(lam.rank()) != l) throw Error("eval: labels must have length n-1");

    std::function<SeriesValue(const TorusPoint&)> fn;
    if (o.kind == "sigma") {
        fn = [&rs](const TorusPoint& v) {
            SeriesValue s;
            s.value = sigma_eval(rs, v);
            s.tail_bound = 0.0;
            return s;
        };
    } else if (o.kind == "character") {
        fn = [&rs, lam](const TorusPoint& v) {
            SeriesValue s;
            s.value = character_eval(rs, lam, v);
            s.tail_bound = 0.0;
            return s;
        };
    } else if (o.kind == "theta") {
        ThetaSymmetry sym = ThetaSymmetry::plain;
        if (o.symmetry == "plus") sym = ThetaSymmetry::plus;
        else if (o.symmetry == "minus") sym = ThetaSymmetry::minus;
        else if (o.symmetry == "hatplus") sym = ThetaSymmetry::hatplus;
        else if (o.symmetry != "plain") throw Error("eval: unknown symmetry " + o.symmetry);
        auto th = std::make_shared<NATheta>(rs, lam, o.k, EllipticModulus(tau), sym, o.tol);
        fn = [th](const TorusPoint& v) { return th->eval(v); };
    } else if (o.kind == "cst-psi") {
        auto psi = std::make_shared<PsiDistribution>(rs, lam, o.k);
        auto img = std::make_shared<CSTImage>(*psi, tau);
        fn = [img](const TorusPoint& v) {
            SeriesValue s;
            s.value = img->eval(v);
            s.tail_bound = 0.0;
            return s;
        };
    } else {
        throw Error("eval: unknown kind " + o.kind);
    }

    std::ostringstream os;
    os.precision(17);
    for (int i = 0; i < l; ++i) os << "re_z" << i << ",im_z" << i << ",";
    os << "value_re,value_im,tail_bound,status\n";
    // data-parallel over points in fixed blocks; rows assembled in order
    std::vector<std::string> rows(points.size());
    par::for_blocks(points.size(), 16, [&](std::size_t, std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            std::ostringstream row;
            row.precision(17);
            for (int i = 0; i < l; ++i)
                row << points[p].coords[i].real() << "," << points[p].coords[i].imag() << ",";
            try {
                SeriesValue s = fn(TorusPoint(points[p].coords));
                row << s.value.real() << "," << s.value.imag() << "," << s.tail_bound << ",ok\n";
            } catch (const SingularLocusError&) {
                row << "nan,nan,nan,singular\n";
            }
            rows[p] = row.str();
        }
    });
    for (const auto& rstr : rows) os << rstr;

    write_text(common.output, os.str());
    if (!o.bless_path.empty()) {
        std::ofstream gs(o.bless_path);
        if (!gs) throw Error("cannot open golden path " + o.bless_path);
        gs << os.str();
    }
    return kExitPass;
}

struct ChecksOpts {
    int n = 3;
    long long k = 1;
    std::string tau = "0+1i";
    double t_detune = 0.0;
    int N = 0;
    double tolerance = 1e-6;
    int samples = 20;
};

int cmd_checks(const ChecksOpts& o, const CommonOpts& common) {
    CheckConfig cfg;
    cfg.n = o.n;
    cfg.k = o.k;
    cfg.tau = parse_complex(o.tau);
    cfg.t_detune = o.t_detune;
    cfg.quadrature_n = o.N;
    cfg.tolerance = o.tolerance;
    cfg.seed = common.seed;
    cfg.samples = o.samples;
    auto results = run_checks(cfg);

    bool all = true;
    json j;
    j["schema"] = 1;
    j["checks"] = json::array();
    for (const auto& r : results) {
        all = all && r.pass;
        json e;
        e["name"] = r.name;
        e["value"] = std::isnan(r.value) ? json() : json(r.value);
        e["threshold"] = r.threshold;
        e["direction"] = r.larger_is_pass ? ">" : "<=";
        e["pass"] = r.pass;
        if (!r.note.empty()) e["note"] = r.note;
        j["checks"].push_back(e);
        std::cerr << (r.pass ? "PASS " : "FAIL ") << r.name << "  (" << r.value
                  << (r.larger_is_pass ? " > " : " <= ") << r.threshold << ")\n";
    }
    j["all_pass"] = all;
    write_text(common.output, j.dump(2));
    return all ? kExitPass : kExitTolerance;
}

int cmd_periods(int n, const CommonOpts& common) {
    auto d = canonical_basis(n);
    json j = canonical_basis_to_json(d);
    j["smith_divisors_of_E"] = smith_normal_form(polarization_form(n));
    write_text(common.output, j.dump(2));
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"theta-forge: genus-one non-abelian theta functions for SU(n) via the "
                 "coherent state transform"};
    app.require_subcommand(1);
    app.fallthrough();
    app.config_formatter(std::make_shared<ConfigJSON>());
    app.set_config("--config", "", "JSON config file with the same keys as the flags");

    CommonOpts common;

    auto* verlinde = app.add_subcommand("verlinde", "integrable-weight counts vs Verlinde numbers");
    verlinde->fallthrough();
    int vn_min = 2, vn_max = 6;
    long long vk_min = 0, vk_max = 8;
    verlinde->add_option("--n-min", vn_min);
    verlinde->add_option("--n-max", vn_max)->check(CLI::Range(2, 8));
    verlinde->add_option("--k-min", vk_min);
    verlinde->add_option("--k-max", vk_max)->check(CLI::Range(0LL, 12LL));
    common.attach(verlinde);

    auto* gram = app.add_subcommand("gram", "unitarity Gram matrices by torus quadrature");
    gram->fallthrough();
    GramOpts go;
    gram->add_option("--n", go.n, "SU(n)")->check(CLI::Range(2, 8));
    gram->add_option("--k", go.k, "level");
    gram->add_option("--tau", go.tau, "modular parameter, e.g. 0.3+0.8i");
    gram->add_option("--N", go.N, "grid points per dimension (0 = default + refinement)");
    gram->add_option("--t", go.t, "override the CST time (level gate probe)");
    gram->add_option("--tolerance", go.tolerance, "pass threshold on the deviation from identity");
    gram->add_flag("--abelian", go.abelian, "abelian CST unitarity instead of SU(n)");
    gram->add_option("--l", go.l, "abelian: torus dimension");
    gram->add_option("--delta", go.delta, "abelian: comma-separated elementary divisors");
    gram->add_option("--omega-file", go.omega_file, "abelian: JSON descriptor {l, omega, delta, k}");
    gram->add_flag("--orbifold", go.orbifold, "su2: use k' = 2k+3");
    gram->add_option("--family", go.family, "su2: integral or half")
        ->check(CLI::IsMember({"integral", "half"}));
    common.attach(gram);

    auto* eval = app.add_subcommand("eval", "evaluate theta/character/sigma/cst-psi on points");
    eval->fallthrough();
    EvalOpts eo;
    eval->add_option("--kind", eo.kind)->check(CLI::IsMember({"theta", "character", "cst-psi", "sigma"}));
    eval->add_option("--n", eo.n)->check(CLI::Range(2, 8));
    eval->add_option("--k", eo.k);
    eval->add_option("--labels", eo.labels, "comma-separated Dynkin labels");
    eval->add_option("--symmetry", eo.symmetry)
        ->check(CLI::IsMember({"plain", "plus", "minus", "hatplus"}));
    eval->add_option("--tau", eo.tau);
    eval->add_option("--points", eo.points_file, "points file, one complex vector per line");
    eval->add_option("--tolerance", eo.tol, "series tail tolerance");
    eval->add_option("--bless", eo.bless_path, "also (re)write this golden file");
    common.attach(eval);

    auto* checks = app.add_subcommand("checks", "run the full property suite");
    checks->fallthrough();
    ChecksOpts co;
    checks->add_option("--n", co.n)->check(CLI::Range(2, 8));
    checks->add_option("--k", co.k);
    checks->add_option("--tau", co.tau);
    checks->add_option("--t-detune", co.t_detune, "offset the CST time in the descent checks");
    checks->add_option("--N", co.N);
    checks->add_option("--tolerance", co.tolerance);
    checks->add_option("--samples", co.samples);
    common.attach(checks);

    auto* periods = app.add_subcommand("periods", "canonical basis and period matrix data");
    periods->fallthrough();
    int pn = 3;
    periods->add_option("--n", pn)->check(CLI::Range(2, 8));
    common.attach(periods);

    CLI11_PARSE(app, argc, argv);

    try {
        common.apply();
        if (app.got_subcommand(verlinde)) return cmd_verlinde(vn_min, vn_max, vk_min, vk_max, common);
        if (app.got_subcommand(gram)) return cmd_gram(go, common);
        if (app.got_subcommand(eval)) return cmd_eval(eo, common);
        if (app.got_subcommand(checks)) return cmd_checks(co, common);
        if (app.got_subcommand(periods)) return cmd_periods(pn, common);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
