// dimwit — command line front end for behavior construction, Bell-functional
// evaluation, swap-fidelity computation and the moment-SDP certification runs.

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dimwit/behavior.hpp"
#include "dimwit/npa.hpp"
#include "dimwit/sdp.hpp"
#include "dimwit/swap.hpp"
#include "dimwit/witness.hpp"

using namespace dimwit;

namespace {

int thread_cap() {
    if (const char* env = std::getenv("DIMWIT_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return int(std::max(1u, std::thread::hardware_concurrency()));
}

Behavior behavior_by_name(const std::string& spec) {
    auto starts = [&](const std::string& p) { return spec.rfind(p, 0) == 0; };
    if (spec == "mes4") return p_mes4();
    if (spec == "mes8") return p_mes8();
    if (spec == "mes8-coarse3") {
        std::vector<int> cmap = {2, 0, 1, 2, 0, 1, 2, 0}; // {1,4,7}->0, {2,5}->1, {0,3,6}->2
        return coarse_grain(p_mes8(), cmap, cmap);
    }
    if (starts("bsm:")) return p_bsm(std::stod(spec.substr(4)));
    if (starts("bsm-aligned:")) return p_bsm_aligned(std::stod(spec.substr(12)));
    if (starts("bsm-certref:")) return p_certificate_reference(std::stod(spec.substr(12)));
    if (starts("chsh-ref:")) return p_chsh_ref(std::stoi(spec.substr(9)));
    std::ifstream in(spec);
    if (!in) throw CLI::ValidationError("behavior", "unknown behavior name or unreadable file: " + spec);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return Behavior::from_json(text);
}

QuantumModel model_by_name(const std::string& spec) {
    auto starts = [&](const std::string& p) { return spec.rfind(p, 0) == 0; };
    if (spec == "ideal") return ideal_swap_model();
    if (spec == "counterexample") return counterexample_model();
    if (starts("bsm:")) return bsm_model(std::stod(spec.substr(4)));
    if (starts("bsm-aligned:")) return aligned_bsm_model(std::stod(spec.substr(12)));
    if (starts("bsm-certref:")) return certificate_reference_model(std::stod(spec.substr(12)));
    throw CLI::ValidationError("model", "unknown model name: " + spec);
}

CgInequality inequality_by_name(const std::string& spec) {
    if (spec == "certificate") return certificate_inequality();
    if (spec == "chsh") return chsh_as_cg();
    std::ifstream in(spec);
    if (!in) throw CLI::ValidationError("inequality", "unknown inequality name or unreadable file: " + spec);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return CgInequality::from_json(text);
}

std::vector<Word> ops_by_name(const std::string& name) {
    if (name == "default390") return default_operator_set();
    if (name == "fallback") return fallback_operator_set();
    throw CLI::ValidationError("ops", "operator set must be default390 or fallback");
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(path);
    out << text << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"device-independent dimension witness workbench"};
    app.require_subcommand(1);

    // ---- witness ----
    auto* witness = app.add_subcommand("witness", "evaluate Bell functionals");
    witness->require_subcommand(1);

    std::string w_behavior, w_norm = "raw", w_ineq = "certificate", w_out;
    int w_d = 4, w_variant = 0;

    auto* cglmp = witness->add_subcommand("cglmp", "CGLMP_d value of a behavior");
    cglmp->add_option("--d", w_d, "number of outcomes");
    cglmp->add_option("--behavior", w_behavior, "behavior name or JSON file")->required();
    cglmp->add_option("--norm", w_norm, "raw | brunner | cy");
    cglmp->callback([&] {
        CglmpNorm n = w_norm == "raw" ? CglmpNorm::Raw
                    : w_norm == "brunner" ? CglmpNorm::Brunner
                    : CglmpNorm::Cy;
        auto v = cglmp_value(behavior_by_name(w_behavior), w_d, n);
        std::printf("%.6f (raw %.6f, normalization %s)\n", v.normalized, v.raw, v.normalization.c_str());
    });

    auto* chsh = witness->add_subcommand("chsh", "CHSH variant S_b of a binary behavior");
    chsh->add_option("--behavior", w_behavior)->required();
    chsh->add_option("--variant", w_variant, "0..3");
    chsh->callback([&] {
        std::printf("%.6f\n", chsh_value(behavior_by_name(w_behavior), w_variant));
    });

    auto* evalc = witness->add_subcommand("eval", "evaluate a Collins-Gisin inequality");
    evalc->add_option("--inequality", w_ineq, "certificate | chsh | JSON file");
    evalc->add_option("--behavior", w_behavior)->required();
    evalc->callback([&] {
        std::printf("%.6f\n", eval_inequality(inequality_by_name(w_ineq), behavior_by_name(w_behavior)));
    });

    auto* lbound = witness->add_subcommand("localbound", "deterministic maximum of an inequality");
    lbound->add_option("--inequality", w_ineq);
    lbound->callback([&] {
        auto r = local_bound(inequality_by_name(w_ineq));
        std::printf("%.6f over %lld strategies\n", r.value, r.strategies);
    });

    // ---- behavior ----
    auto* beh = app.add_subcommand("behavior", "emit a built-in behavior as JSON");
    std::string b_name, b_out;
    beh->add_option("--name", b_name)->required();
    beh->add_option("--out", b_out, "output path (default stdout)");
    beh->callback([&] { write_output(b_out, behavior_by_name(b_name).to_json()); });

    // ---- certify ----
    auto* certify = app.add_subcommand("certify", "swap fidelity and SDP bounds");
    certify->require_subcommand(1);

    std::string c_model = "ideal", c_behavior, c_ops = "default390", c_out, c_ineq = "certificate";
    std::string c_sweep_var = "visibility";
    double c_from = 0.9, c_to = 1.0, c_value = 1.0;
    int c_steps = 5, c_maxiter = 20000, c_verbosity = 0;
    double c_tol = 1e-6;

    auto* fid = certify->add_subcommand("fidelity", "explicit-model swap fidelity");
    fid->add_option("--model", c_model, "ideal | counterexample | bsm:V | bsm-aligned:V | bsm-certref:V");
    fid->callback([&] { std::cout << fidelity_F(model_by_name(c_model)).to_json() << "\n"; });

    auto* swapx = certify->add_subcommand("swapping", "thought-experiment form of the fidelity");
    swapx->add_option("--model", c_model);
    swapx->callback([&] { std::cout << swapping_experiment(model_by_name(c_model)).to_json() << "\n"; });

    auto* sdp = certify->add_subcommand("sdp", "minimize F over moment matrices compatible with a behavior");
    sdp->add_option("--behavior", c_behavior)->required();
    sdp->add_option("--ops", c_ops, "default390 | fallback");
    sdp->add_option("--max-iter", c_maxiter);
    sdp->add_option("--tol", c_tol);
    sdp->add_option("--verbosity", c_verbosity);
    sdp->add_option("--out", c_out);
    sdp->callback([&] {
        auto prob = assemble_problem_behavior(behavior_by_name(c_behavior), ops_by_name(c_ops));
        SolverOptions opts;
        opts.max_iterations = c_maxiter;
        opts.tol_primal = opts.tol_dual = c_tol;
        opts.verbosity = c_verbosity;
        auto res = solve(prob, opts);
        write_output(c_out, res.to_json());
        if (res.status == "infeasible-suspected") std::exit(3);
    });

    auto* sdpv = certify->add_subcommand("sdp-value", "minimize F at a fixed inequality value");
    sdpv->add_option("--inequality", c_ineq);
    sdpv->add_option("--value", c_value)->required();
    sdpv->add_option("--ops", c_ops);
    sdpv->add_option("--max-iter", c_maxiter);
    sdpv->add_option("--tol", c_tol);
    sdpv->add_option("--verbosity", c_verbosity);
    sdpv->add_option("--out", c_out);
    sdpv->callback([&] {
        auto prob = assemble_problem_inequality(inequality_by_name(c_ineq), c_value, ops_by_name(c_ops));
        SolverOptions opts;
        opts.max_iterations = c_maxiter;
        opts.tol_primal = opts.tol_dual = c_tol;
        opts.verbosity = c_verbosity;
        auto res = solve(prob, opts);
        write_output(c_out, res.to_json());
    });

    auto* extract = certify->add_subcommand("extract", "extract the dual Bell inequality at a behavior");
    extract->add_option("--behavior", c_behavior)->required();
    extract->add_option("--ops", c_ops);
    extract->add_option("--max-iter", c_maxiter);
    extract->add_option("--tol", c_tol);
    extract->add_option("--out", c_out);
    extract->callback([&] {
        auto prob = assemble_problem_behavior(behavior_by_name(c_behavior), ops_by_name(c_ops));
        SolverOptions opts;
        opts.max_iterations = c_maxiter;
        opts.tol_primal = opts.tol_dual = c_tol;
        auto res = solve(prob, opts);
        auto ineq = extract_inequality(res, prob);
        write_output(c_out, ineq.to_json());
    });

    auto* sweep = certify->add_subcommand("sweep", "bound F along a visibility or violation sweep (CSV)");
    sweep->add_option("--x", c_sweep_var, "visibility | violation");
    sweep->add_option("--family", c_behavior, "behavior family for visibility sweeps (bsm | bsm-aligned | bsm-certref)");
    sweep->add_option("--ineq", c_ineq, "inequality for violation sweeps");
    sweep->add_option("--from", c_from)->required();
    sweep->add_option("--to", c_to)->required();
    sweep->add_option("--steps", c_steps);
    sweep->add_option("--ops", c_ops);
    sweep->add_option("--max-iter", c_maxiter);
    sweep->add_option("--tol", c_tol);
    sweep->add_option("--out", c_out)->required();
    sweep->callback([&] {
        if (c_steps < 1) throw CLI::ValidationError("steps", "steps must be >= 1");
        if (c_from > c_to) throw CLI::ValidationError("from", "sweep bounds must be ordered");
        std::vector<double> xs(c_steps);
        for (int i = 0; i < c_steps; ++i)
            xs[i] = c_steps == 1 ? c_from : c_from + (c_to - c_from) * i / (c_steps - 1);
        std::vector<std::string> rows(c_steps);
        auto run_point = [&](int i) {
            SolverOptions opts;
            opts.max_iterations = c_maxiter;
            opts.tol_primal = opts.tol_dual = c_tol;
            SdpProblem prob;
            if (c_sweep_var == "visibility") {
                std::string fam = c_behavior.empty() ? "bsm" : c_behavior;
                prob = assemble_problem_behavior(behavior_by_name(fam + ":" + std::to_string(xs[i])),
                                                 ops_by_name(c_ops));
            } else {
                prob = assemble_problem_inequality(inequality_by_name(c_ineq), xs[i], ops_by_name(c_ops));
            }
            auto res = solve(prob, opts);
            char buf[160];
            std::snprintf(buf, sizeof buf, "%.6f,%.6f,%s,%d", xs[i], res.bound,
                          res.status.c_str(), res.iterations);
            rows[i] = buf;
        };
        int cap = thread_cap();
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < std::min(cap, c_steps); ++t)
            pool.emplace_back([&] {
                for (int i = next++; i < c_steps; i = next++) run_point(i);
            });
        for (auto& th : pool) th.join();
        std::ostringstream os;
        os << (c_sweep_var == "visibility" ? "visibility" : "violation") << ",F_bound,status,iterations\n";
        for (auto& rline : rows) os << rline << "\n";
        write_output(c_out, os.str());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
