// qwgt-lab: exact evaluation of +-J Ising partition functions, quadratically
// signed weight enumerators, and the q=2 Kauffman/Potts bridge.

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "qwgtlab/json_io.hpp"
#include "qwgtlab/knot.hpp"
#include "qwgtlab/qwgt.hpp"
#include "qwgtlab/rng.hpp"
#include "qwgtlab/spin_glass.hpp"

using namespace qwgtlab;

namespace {

// exit codes: 0 ok, 1 verification failure, 2 parse, 3 cap/guard, 4 domain
constexpr int kExitVerify = 1;
constexpr int kExitParse = 2;
constexpr int kExitCap = 3;
constexpr int kExitDomain = 4;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
    }
};

void emit(const Json& report, const std::string& json_out) {
    std::cout << report.dump(2) << "\n";
    if (!json_out.empty()) {
        std::ofstream out(json_out);
        if (!out)
            throw ParseError("cannot write to " + json_out);
        out << report.dump(2) << "\n";
    }
}

EvalLimits make_limits(std::uint64_t cap_flag, unsigned threads) {
    EvalLimits lim;
    if (const char* env = std::getenv("QWGT_LAB_CAP")) {
        char* end = nullptr;
        auto v = std::strtoull(env, &end, 10);
        if (end == env || *end != '\0' || v == 0)
            throw ParseError("QWGT_LAB_CAP must be a positive integer, got '" +
                             std::string(env) + "'");
        lim.enumeration_cap = v;
    }
    if (cap_flag)
        lim.enumeration_cap = cap_flag;
    lim.threads = threads;
    return lim;
}

/// "0110"-style bond override; commas and spaces are tolerated.
Gf2Vector parse_w_flag(const std::string& text, std::size_t num_edges) {
    std::string bits;
    for (char c : text) {
        if (c == ',' || c == ' ')
            continue;
        if (c != '0' && c != '1')
            throw ParseError("--w must be a string of 0/1 bits, got '" + text + "'");
        bits.push_back(c);
    }
    if (bits.size() != num_edges)
        throw ParseError("--w has " + std::to_string(bits.size()) + " bits but the graph has " +
                         std::to_string(num_edges) + " edges");
    Gf2Vector w(num_edges);
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i] == '1')
            w.flip(i);
    return w;
}

struct CouplingFlags {
    std::string beta_j;
    std::string lambda;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--betaJ", beta_j, "coupling beta*J (decimal, or re,im for complex)");
        cmd->add_option("--lambda", lambda,
                        "tanh(beta J) directly (decimal, re,im, or p/q for exact mode)");
    }

    void require_one() const {
        if (beta_j.empty() == lambda.empty())
            throw ParseError("exactly one of --betaJ or --lambda is required");
    }
};

bool is_complex_literal(const std::string& s) { return s.find(',') != std::string::npos; }

Complex parse_complex_flag(const std::string& s) {
    auto comma = s.find(',');
    return {parse_double(s.substr(0, comma)), parse_double(s.substr(comma + 1))};
}

Json complex_log(Complex z) {
    Complex l = std::log(z);
    return Json{{"re", format_scalar(l.real())}, {"im", format_scalar(l.imag())}};
}

// ---------------------------------------------------------------------------
// z-eval and series

template <class S>
struct ZOutcome {
    S z;
    std::size_t kernel_dim = 0;
    std::uint64_t terms = 0;
};

template <class S>
ZOutcome<S> run_method(const SpinGlassInstance<S>& inst, const std::string& method,
                       std::size_t order, const EvalLimits& lim) {
    const std::size_t nv = inst.graph.num_vertices(), ne = inst.graph.num_edges();
    ZOutcome<S> out;
    out.kernel_dim = cycle_space_dimension(inst.graph);
    if (method == "direct") {
        out.z = partition_direct(inst, lim);
        out.terms = std::uint64_t{1} << nv;
    } else if (method == "fourier") {
        out.z = partition_double_transform(inst, lim);
        out.terms = std::uint64_t{1} << (nv + ne);
    } else if (method == "kernel") {
        out.z = partition_kernel(inst, lim);
        out.terms = std::uint64_t{1} << out.kernel_dim;
    } else if (method == "series") {
        auto res = partition_series(inst, order, lim);
        out.z = res.partial.back();
        out.terms = res.terms_scanned;
    } else if (method == "qwgt") {
        auto bridge = qwgt_bridge(inst, lim);
        out.z = bridge.rhs * kernel_prefactor(inst.coupling, nv, ne);
        out.terms = std::uint64_t{1} << out.kernel_dim;
    } else {
        throw ParseError("unknown method '" + method +
                         "' (expected direct|fourier|kernel|series|qwgt)");
    }
    return out;
}

/// Dispatch on the coupling flags: "p/q" lambda selects the exact-rational
/// field, a "re,im" literal the complex one, plain decimals run as doubles.
template <class Fn>
int with_coupling_instance(const GraphFile& gf, const CouplingFlags& coupling, Fn&& fn) {
    coupling.require_one();
    if (!coupling.lambda.empty() && coupling.lambda.find('/') != std::string::npos) {
        return fn(SpinGlassInstance<Rational>{
            gf.graph, gf.bonds,
            Coupling<Rational>::from_lambda(parse_rational(coupling.lambda))});
    }
    if ((!coupling.beta_j.empty() && is_complex_literal(coupling.beta_j)) ||
        (!coupling.lambda.empty() && is_complex_literal(coupling.lambda))) {
        auto c = coupling.beta_j.empty()
                     ? Coupling<Complex>::from_lambda(parse_complex_flag(coupling.lambda))
                     : Coupling<Complex>::from_beta_j(parse_complex_flag(coupling.beta_j));
        return fn(SpinGlassInstance<Complex>{gf.graph, gf.bonds, c});
    }
    auto c = coupling.beta_j.empty()
                 ? Coupling<double>::from_lambda(parse_double(coupling.lambda))
                 : Coupling<double>::from_beta_j(parse_double(coupling.beta_j));
    return fn(SpinGlassInstance<double>{gf.graph, gf.bonds, c});
}

Json log_z_json(const Rational& z) {
    auto approx = static_cast<double>(z);
    return approx > 0 ? Json(format_scalar(std::log(approx))) : Json();
}
Json log_z_json(double z) { return z > 0 ? Json(format_scalar(std::log(z))) : Json(); }
Json log_z_json(Complex z) { return z != Complex(0.0, 0.0) ? complex_log(z) : Json(); }

int cmd_z_eval(const std::string& graph_file, const CouplingFlags& coupling,
               const std::string& method, std::size_t order, const std::string& w_flag,
               const EvalLimits& lim, const std::string& json_out) {
    auto gf = parse_graph_json(load_json_file(graph_file));
    if (!w_flag.empty())
        gf.bonds.w = parse_w_flag(w_flag, gf.graph.num_edges());
    if (order == SIZE_MAX)
        order = gf.graph.num_edges();

    return with_coupling_instance(gf, coupling, [&](const auto& inst) {
        Timer timer;
        auto outcome = run_method(inst, method, order, lim);
        Json report{{"Z", scalar_json(outcome.z)},
                    {"logZ", log_z_json(outcome.z)},
                    {"method", method},
                    {"kernel_dim", outcome.kernel_dim},
                    {"terms_evaluated", outcome.terms},
                    {"elapsed_ms", timer.ms()}};
        emit(report, json_out);
        return 0;
    });
}

int cmd_series(const std::string& graph_file, const CouplingFlags& coupling, std::size_t order,
               const std::string& w_flag, const EvalLimits& lim, const std::string& json_out) {
    auto gf = parse_graph_json(load_json_file(graph_file));
    if (!w_flag.empty())
        gf.bonds.w = parse_w_flag(w_flag, gf.graph.num_edges());
    if (order == SIZE_MAX)
        order = gf.graph.num_edges();

    return with_coupling_instance(gf, coupling, [&](const auto& inst) {
        Timer timer;
        auto res = partition_series(inst, order, lim);
        Json orders = Json::array();
        for (std::size_t k = 0; k < res.partial.size(); ++k)
            orders.push_back(Json{{"order", k}, {"partial_Z", scalar_json(res.partial[k])}});
        Json report{{"method", "series"},
                    {"kernel_dim", cycle_space_dimension(gf.graph)},
                    {"orders", orders},
                    {"exact", res.exact ? scalar_json(*res.exact) : Json()},
                    {"terms_evaluated", res.terms_scanned},
                    {"elapsed_ms", timer.ms()}};
        emit(report, json_out);
        return 0;
    });
}

// ---------------------------------------------------------------------------

int cmd_qwgt_eval(const std::string& file, const std::string& method, const EvalLimits& lim,
                  const std::string& json_out) {
    if (method != "brute" && method != "kernel" && method != "both")
        throw ParseError("unknown method '" + method + "' (expected brute|kernel|both)");
    auto loaded = parse_qwgt_instance(load_json_file(file));
    Timer timer;
    Json report;
    std::visit(
        [&](const auto& inst) {
            report["n"] = inst.dimension();
            report["kernel_dim"] = kernel_basis(inst.a).dim();
            bool want_brute = method == "brute" || method == "both";
            bool want_kernel = method == "kernel" || method == "both";
            if (method == "both" && inst.dimension() > lim.oracle_bits)
                want_brute = false; // oracle infeasible; keep the kernel value
            std::optional<decltype(inst.x)> kernel_v, brute_v;
            if (want_kernel)
                kernel_v = qwgt_kernel(inst, lim);
            if (want_brute)
                brute_v = qwgt_bruteforce(inst, lim);
            report["value_kernel"] = kernel_v ? scalar_json(*kernel_v) : Json();
            report["value_bruteforce"] = brute_v ? scalar_json(*brute_v) : Json();
            if (kernel_v && brute_v)
                report["discrepancy"] =
                    format_scalar(relative_discrepancy(*kernel_v, *brute_v));
            auto value = kernel_v ? *kernel_v : *brute_v;
            report["bound_holds"] = qwgt_bound_check(inst, value);
        },
        loaded);
    report["method"] = method;
    report["elapsed_ms"] = timer.ms();
    emit(report, json_out);
    return 0;
}

int cmd_kl_sign(const std::string& file, long k, long l, const EvalLimits& lim,
                const std::string& json_out) {
    auto doc = load_json_file(file);
    if (!doc.is_object() || !doc.contains("A"))
        throw ParseError("kl-sign input must be a JSON object with field \"A\"");
    auto a = parse_bit_matrix(doc.at("A"), "A");
    Timer timer;
    auto res = kl_sign(a, k, l, lim);
    Json report{{"sign", res.sign > 0 ? "+" : (res.sign < 0 ? "-" : "0")},
                {"value", format_scalar(res.value)},
                {"promise_holds", res.promise_holds},
                {"n", a.cols()},
                {"k", k},
                {"l", l},
                {"elapsed_ms", timer.ms()}};
    emit(report, json_out);
    return 0;
}

int cmd_kauffman(const std::string& file, const EvalLimits& lim, const std::string& json_out) {
    auto cf = parse_crossing_json(load_json_file(file));
    Timer timer;
    auto ev = kauffman_q2_via_qwgt(cf.a, cf.cfg, lim);
    Json report{{"value", scalar_json(ev.value)},
                {"bracket_up_to_constant", ev.bracket_up_to_constant},
                {"lambda", scalar_json(ev.lambda)},
                {"kernel_dim", ev.kernel_dim},
                {"terms_evaluated", ev.terms_evaluated}};
    if (cf.cfg.lattice.num_vertices() <= lim.oracle_bits) {
        Complex direct = potts_q2_direct(cf.cfg.lattice, kauffman_couplings(cf.a, cf.cfg), lim);
        report["direct_oracle"] = scalar_json(direct);
        report["discrepancy"] = format_scalar(relative_discrepancy(ev.value, direct));
    } else {
        report["direct_oracle"] = Json();
    }
    report["elapsed_ms"] = timer.ms();
    emit(report, json_out);
    return 0;
}

int cmd_kernel_basis(const std::string& file, const std::string& json_out) {
    auto doc = load_json_file(file);
    Gf2Matrix m;
    Json report;
    if (doc.is_object() && doc.contains("vertices")) {
        m = incidence_matrix(parse_graph_json(doc).graph);
        report["source"] = "graph-incidence";
    } else if (doc.is_object() && doc.contains("A")) {
        m = parse_bit_matrix(doc.at("A"), "A");
        report["source"] = "matrix";
    } else {
        throw ParseError("kernel-basis input must be a graph JSON or have field \"A\"");
    }
    auto kb = kernel_basis(m);
    Json basis = Json::array();
    for (const auto& v : kb.basis)
        basis.push_back(v.to_string());
    report["rows"] = m.rows();
    report["cols"] = m.cols();
    report["rank"] = m.cols() - kb.dim();
    report["kernel_dim"] = kb.dim();
    report["basis"] = basis;
    emit(report, json_out);
    return 0;
}

// ---------------------------------------------------------------------------
// verify: all feasible methods on seeded random (w, betaJ) draws. The report
// carries no timing so fixed-seed reruns are byte-identical.

int cmd_verify(const std::string& graph_file, std::uint64_t trials, std::uint64_t seed,
               double tolerance, const EvalLimits& lim, const std::string& json_out,
               const std::string& failure_out) {
    auto gf = parse_graph_json(load_json_file(graph_file));
    const std::size_t nv = gf.graph.num_vertices(), ne = gf.graph.num_edges();
    const std::size_t dim = cycle_space_dimension(gf.graph);

    SplitMix64 rng(seed);
    Json trials_json = Json::array();
    double worst = 0.0;
    std::optional<Json> first_failure;

    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        Gf2Vector w(ne);
        for (std::size_t e = 0; e < ne; ++e)
            if (rng.bit())
                w.flip(e);
        double beta_j = rng.uniform(0.1, 2.0);
        SpinGlassInstance<double> inst{gf.graph, {w}, Coupling<double>::from_beta_j(beta_j)};

        Json methods;
        std::vector<double> values;
        auto record = [&](const std::string& name, double v) {
            methods[name] = format_scalar(v);
            values.push_back(v);
        };

        if (nv <= lim.oracle_bits)
            record("direct", partition_direct(inst, lim));
        if (nv + ne < 63 && (std::uint64_t{1} << (nv + ne)) <= lim.enumeration_cap)
            record("fourier", partition_double_transform(inst, lim));
        if (dim < 63 && (std::uint64_t{1} << dim) <= lim.enumeration_cap) {
            record("kernel", partition_kernel(inst, lim));
            record("qwgt", qwgt_bridge(inst, lim).rhs * kernel_prefactor(inst.coupling, nv, ne));
        }
        if (ne < 63 && (std::uint64_t{1} << ne) <= lim.enumeration_cap)
            record("series", *partition_series(inst, ne, lim).exact);

        double trial_worst = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i)
            for (std::size_t j = i + 1; j < values.size(); ++j)
                trial_worst = std::max(trial_worst, relative_discrepancy(values[i], values[j]));
        worst = std::max(worst, trial_worst);

        trials_json.push_back(Json{{"trial", trial},
                                   {"w", w.to_string()},
                                   {"betaJ", format_scalar(beta_j)},
                                   {"methods", methods},
                                   {"max_discrepancy", format_scalar(trial_worst)}});

        if (trial_worst > tolerance && !first_failure) {
            Json edges = Json::array();
            for (auto [i, j] : gf.graph.edges())
                edges.push_back(Json::array({i, j}));
            Json wbits = Json::array();
            for (std::size_t e = 0; e < ne; ++e)
                wbits.push_back(w.get(e) ? 1 : 0);
            first_failure = Json{{"vertices", nv},
                                 {"edges", edges},
                                 {"w", wbits},
                                 {"betaJ", format_scalar(beta_j)},
                                 {"trial", trial}};
        }
    }

    bool ok = worst <= tolerance;
    Json report{{"graph", graph_file},
                {"trials", trials},
                {"seed", seed},
                {"tolerance", format_scalar(tolerance)},
                {"kernel_dim", dim},
                {"max_discrepancy", format_scalar(worst)},
                {"status", ok ? "ok" : "fail"},
                {"trial_reports", trials_json}};
    if (!ok) {
        std::string path = failure_out.empty() ? "qwgt_verify_failure.json" : failure_out;
        std::ofstream out(path);
        out << first_failure->dump(2) << "\n";
        report["failing_instance"] = path;
    }
    emit(report, json_out);
    return ok ? 0 : kExitVerify;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact +-J Ising / QWGT / Kauffman evaluation toolkit"};
    app.require_subcommand(1);

    std::uint64_t cap_flag = 0;
    unsigned threads = 1;
    std::string json_out;
    app.add_option("--cap", cap_flag, "enumeration cap in kernel elements (default 2^28)");
    app.add_option("--threads", threads, "worker threads for kernel enumeration");
    app.add_option("--json-out", json_out, "also write the report to this file");

    auto* zeval = app.add_subcommand("z-eval", "evaluate the partition function")->fallthrough();
    std::string graph_file, w_flag, method = "kernel";
    std::size_t order = SIZE_MAX;
    CouplingFlags zc;
    zeval->add_option("graph", graph_file, "graph JSON file")->required();
    zeval->add_option("--method", method, "direct|fourier|kernel|series|qwgt");
    zeval->add_option("--order", order, "series truncation order (default |E|)");
    zeval->add_option("--w", w_flag, "override bond bits, e.g. 0110");
    zc.add_to(zeval);

    auto* series = app.add_subcommand("series", "partial sums of the edge-order expansion")->fallthrough();
    std::string series_file, series_w;
    std::size_t series_order = SIZE_MAX;
    CouplingFlags sc;
    series->add_option("graph", series_file, "graph JSON file")->required();
    series->add_option("--order", series_order, "truncation order (default |E|)");
    series->add_option("--w", series_w, "override bond bits");
    sc.add_to(series);

    auto* qe = app.add_subcommand("qwgt-eval", "evaluate a weight-enumerator instance")->fallthrough();
    std::string qwgt_file, qwgt_method = "both";
    qe->add_option("instance", qwgt_file, "instance JSON file")->required();
    qe->add_option("--method", qwgt_method, "brute|kernel|both");

    auto* kl = app.add_subcommand("kl-sign", "sign/promise check for S(A, ltr(A), k, l)")->fallthrough();
    std::string kl_file;
    long kl_k = 0, kl_l = 0;
    kl->add_option("matrix", kl_file, "JSON file with field \"A\"")->required();
    kl->add_option("--k", kl_k, "positive integer k")->required();
    kl->add_option("--l", kl_l, "positive integer l")->required();

    auto* kauf = app.add_subcommand("kauffman", "q=2 Kauffman/Potts evaluation")->fallthrough();
    std::string kauf_file;
    kauf->add_option("crossings", kauf_file, "crossing JSON file")->required();

    auto* kb = app.add_subcommand("kernel-basis", "GF(2) kernel basis of a graph or matrix")->fallthrough();
    std::string kb_file;
    kb->add_option("input", kb_file, "graph JSON or matrix JSON file")->required();

    auto* verify = app.add_subcommand("verify", "cross-check all methods on random bonds")->fallthrough();
    std::string verify_file, failure_out;
    std::uint64_t trials = 20, seed = 1;
    double tolerance = 1e-10;
    verify->add_option("graph", verify_file, "graph JSON file")->required();
    verify->add_option("--trials", trials, "number of random (w, betaJ) draws");
    verify->add_option("--seed", seed, "RNG seed");
    verify->add_option("--tolerance", tolerance, "max allowed relative discrepancy");
    verify->add_option("--failure-out", failure_out, "where to dump a failing instance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help
        app.exit(e);
        return kExitParse;
    }

    try {
        auto lim = make_limits(cap_flag, threads);
        if (*zeval)
            return cmd_z_eval(graph_file, zc, method, order, w_flag, lim, json_out);
        if (*series)
            return cmd_series(series_file, sc, series_order, series_w, lim, json_out);
        if (*qe)
            return cmd_qwgt_eval(qwgt_file, qwgt_method, lim, json_out);
        if (*kl)
            return cmd_kl_sign(kl_file, kl_k, kl_l, lim, json_out);
        if (*kauf)
            return cmd_kauffman(kauf_file, lim, json_out);
        if (*kb)
            return cmd_kernel_basis(kb_file, json_out);
        if (*verify)
            return cmd_verify(verify_file, trials, seed, tolerance, lim, json_out, failure_out);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const CapExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitCap;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
