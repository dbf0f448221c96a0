#include "vmflow/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>
#include <vector>

#include <json.hpp>

#include "vmflow/asymptotics.hpp"
#include "vmflow/baseflow.hpp"
#include "vmflow/config.hpp"
#include "vmflow/lincoeff.hpp"
#include "vmflow/oracle.hpp"
#include "vmflow/output.hpp"

namespace vmflow {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

template <class Fn>
int run_guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const IOError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

const char* error_class_name(const std::exception& e) {
    if (dynamic_cast<const BranchLoss*>(&e)) return "BranchLoss";
    if (dynamic_cast<const BracketFailure*>(&e)) return "BracketFailure";
    if (dynamic_cast<const NoConvergence*>(&e)) return "NoConvergence";
    if (dynamic_cast<const SingularTransform*>(&e)) return "SingularTransform";
    if (dynamic_cast<const DomainError*>(&e)) return "DomainError";
    if (dynamic_cast<const AssemblyError*>(&e)) return "AssemblyError";
    if (dynamic_cast<const FactorizationSingular*>(&e)) return "FactorizationSingular";
    if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
    if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
    if (dynamic_cast<const IOError*>(&e)) return "IOError";
    return "Error";
}

struct RunSetup {
    Config cfg;
    ModelParams params;  // CLI overrides folded in
    int n = 0;
    double tol = 0.0;
    double omega = 0.0;
    fs::path out;
    std::chrono::steady_clock::time_point started;
};

RunSetup prepare(const CliOptions& opt) {
    if (opt.config_path.empty()) throw ValidationError("--config is required");
    RunSetup s;
    s.started = std::chrono::steady_clock::now();
    s.cfg = load_config(opt.config_path);
    s.n = opt.grid > 0 ? opt.grid : s.cfg.grid_n;
    s.tol = opt.tol > 0.0 ? opt.tol : s.cfg.tol;
    s.params = s.cfg.params;
    s.omega = opt.omega_set ? opt.omega : s.params.omega;
    s.params.omega = s.omega;
    s.params.validate();
    (void)Grid(s.n);  // validates the node count early
    if (opt.jobs < 1) throw ValidationError("--jobs must be at least 1");
    s.out = opt.out_dir.empty() ? fs::path(".") : fs::path(opt.out_dir);
    std::error_code ec;
    fs::create_directories(s.out, ec);
    if (ec) throw IOError("cannot create output directory: " + s.out.string());
    return s;
}

// Canonical run-input record covered by the manifest hash: the effective
// configuration (after CLI overrides), the branch range, and the output file
// names. Thread count and wall-clock stay out so reruns hash identically.
std::string canonical_inputs(const std::string& command, const RunSetup& s,
                             const CliOptions& opt,
                             const std::vector<std::string>& output_names) {
    Config effective = s.cfg;
    effective.params = s.params;
    effective.grid_n = s.n;
    effective.tol = s.tol;
    std::ostringstream os;
    os << "command=" << command << "\n"
       << "config=" << serialize_config(effective) << "k_lo=" << opt.k_lo << "\n"
       << "k_hi=" << opt.k_hi << "\n"
       << "with_oracle=" << (opt.with_oracle ? 1 : 0) << "\n"
       << "outputs=";
    for (std::size_t i = 0; i < output_names.size(); ++i)
        os << (i ? "," : "") << output_names[i];
    os << "\nversion=" << kToolVersion << "\n";
    return os.str();
}

void finish_manifest(RunManifest& man, const RunSetup& s, const fs::path& path) {
    man.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - s.started)
            .count();
    write_manifest_json(man, path.string());
}

std::string detect_sign_convention(const HuntReport& rep) {
    if (rep.matches.empty()) return "undetermined";
    int votes[4] = {0, 0, 0, 0};
    for (const HuntMatch& m : rep.matches) {
        const double d[4] = {std::abs(m.lambda_found - m.lambda_seed),
                             std::abs(m.lambda_found - std::conj(m.lambda_seed)),
                             std::abs(m.lambda_found + std::conj(m.lambda_seed)),
                             std::abs(m.lambda_found + m.lambda_seed)};
        int best = 0;
        for (int i = 1; i < 4; ++i)
            if (d[i] < d[best]) best = i;
        ++votes[best];
    }
    static const char* names[4] = {
        "lambda_found ~ lambda_seed", "lambda_found ~ conj(lambda_seed)",
        "lambda_found ~ -conj(lambda_seed)", "lambda_found ~ -lambda_seed"};
    int best = 0;
    for (int i = 1; i < 4; ++i)
        if (votes[i] > votes[best]) best = i;
    return names[best];
}

std::string oracle_csv_text(const HuntReport& rep, std::uint64_t hash, int grid_n) {
    std::ostringstream csv;
    csv << "# manifest-hash: " << hash_hex(hash) << "\n"
        << "k_seed,re_lambda_seed,im_lambda_seed,re_lambda_found,im_lambda_found,"
           "residual,divergence_diag,grid_n\n";
    for (const HuntMatch& m : rep.matches)
        csv << m.k_seed << ',' << format_g17(m.lambda_seed.real()) << ','
            << format_g17(m.lambda_seed.imag()) << ','
            << format_g17(m.lambda_found.real()) << ','
            << format_g17(m.lambda_found.imag()) << ',' << format_g17(m.residual)
            << ',' << format_g17(m.divergence_diag) << ',' << grid_n << "\n";
    return csv.str();
}

ordered_json hunt_json(const HuntReport& rep) {
    ordered_json j;
    j["sign_convention"] = detect_sign_convention(rep);
    auto matches = ordered_json::array();
    for (const HuntMatch& m : rep.matches) {
        ordered_json e;
        e["k_seed"] = m.k_seed;
        e["lambda_seed"] = {m.lambda_seed.real(), m.lambda_seed.imag()};
        e["via_conjugate"] = m.via_conjugate;
        e["lambda_found"] = {m.lambda_found.real(), m.lambda_found.imag()};
        e["residual"] = m.residual;
        e["divergence_diag"] = m.divergence_diag;
        e["seed_distance"] = m.seed_distance;
        matches.push_back(std::move(e));
    }
    j["matches"] = std::move(matches);
    auto failures = ordered_json::array();
    for (const HuntFailure& f : rep.failures) {
        ordered_json e;
        e["k_seed"] = f.k_seed;
        e["sigma"] = {f.sigma.real(), f.sigma.imag()};
        e["error"] = f.error;
        failures.push_back(std::move(e));
    }
    j["failures"] = std::move(failures);
    return j;
}

bool any_seed_matched(const EigenFamily& family, const HuntReport& rep) {
    for (const Cplx& seed : family.lambdas) {
        const double scale = std::abs(seed);
        if (scale == 0.0) continue;
        for (const HuntMatch& m : rep.matches) {
            const double rel = std::min(std::abs(m.lambda_found - seed),
                                        std::abs(m.lambda_found - std::conj(seed))) /
                               scale;
            if (rel <= 0.1) return true;
        }
    }
    return false;
}

}  // namespace

int cmd_baseflow(const CliOptions& opt) {
    return run_guarded([&]() -> int {
        RunSetup s = prepare(opt);
        Grid grid(s.n);
        const BaseFlow flow = solve_base_flow(s.params, grid, s.tol, s.cfg.max_outer);
        const auto fd_residuals = base_flow_residuals(flow, s.params);

        const std::vector<std::string> outputs = {"baseflow.csv", "baseflow.svg",
                                                  "baseflow_manifest.json"};
        RunManifest man =
            make_manifest("baseflow", canonical_inputs("baseflow", s, opt, outputs),
                          {s.n}, {{"tol", s.tol}}, outputs);

        const std::vector<double> u = as_double(flow.u_hat);
        const std::vector<double> a11 = as_double(flow.a11_hat);
        const std::vector<double> a12 = as_double(flow.a12_hat);
        const std::vector<double> a22 = as_double(flow.a22_hat);
        const std::vector<double> Z = as_double(flow.Z_hat);
        const std::vector<double> L = as_double(flow.L_hat);
        const std::vector<double> P = as_double(flow.P_hat);

        std::ostringstream csv;
        csv << "# manifest-hash: " << hash_hex(man.hash) << "\n"
            << "# C_bar: " << format_g17(static_cast<double>(flow.C_bar)) << "\n"
            << "# M_hat: " << format_g17(flow.M_hat) << "\n";
        for (const auto& [key, value] : flow.residuals)
            csv << "# solver " << key << ": " << format_g17(value) << "\n";
        for (const auto& [key, value] : fd_residuals)
            csv << "# residual " << key << ": " << format_g17(value) << "\n";
        csv << "y,u,a11,a12,a22,Z,L,P\n";
        for (int i = 0; i < s.n; ++i)
            csv << format_g17(grid.y(i)) << ',' << format_g17(u[i]) << ','
                << format_g17(a11[i]) << ',' << format_g17(a12[i]) << ','
                << format_g17(a22[i]) << ',' << format_g17(Z[i]) << ','
                << format_g17(L[i]) << ',' << format_g17(P[i]) << "\n";
        write_text_file((s.out / "baseflow.csv").string(), csv.str());

        std::string msg;
        if (!emit_profile_svg((s.out / "baseflow.svg").string(), "Base velocity profile",
                              "y", "u", grid.nodes(), u, man.hash, &msg))
            std::cerr << "warning: " << msg << "\n";

        finish_manifest(man, s, s.out / "baseflow_manifest.json");
        return 0;
    });
}

int cmd_spectrum(const CliOptions& opt) {
    return run_guarded([&]() -> int {
        RunSetup s = prepare(opt);
        if (opt.k_hi < opt.k_lo) throw ValidationError("--k-hi must be >= --k-lo");
        Grid grid(s.n);
        const BaseFlow flow = solve_base_flow(s.params, grid, s.tol, s.cfg.max_outer);
        const LinearCoefficients coeffs = build_coefficients(flow, s.params);
        const EigenFamily family =
            asymptotic_eigenvalues(coeffs, s.omega, opt.k_lo, opt.k_hi);

        bool oracle_run = false, oracle_skipped = false;
        HuntReport hunt;
        if (opt.with_oracle) {
            if (s.omega == 0.0) {
                oracle_skipped = true;
                std::cerr << "warning: oracle skipped: omega = 0 is outside the "
                             "oracle domain; asymptotics still emitted\n";
            } else {
                const Pencil pencil =
                    assemble_pencil(coeffs, flow, s.params, s.omega, s.n);
                hunt = hunt_spectrum(pencil, family, s.tol, opt.jobs);
                oracle_run = true;
            }
        }

        std::vector<std::string> outputs = {"spectrum.csv", "spectrum.json"};
        if (oracle_run) outputs.push_back("oracle.csv");
        outputs.push_back("spectrum_manifest.json");
        RunManifest man =
            make_manifest("spectrum", canonical_inputs("spectrum", s, opt, outputs),
                          {s.n}, {{"tol", s.tol}}, outputs);

        std::ostringstream csv;
        csv << "# manifest-hash: " << hash_hex(man.hash) << "\n"
            << "omega,k,re_lambda,im_lambda\n";
        for (std::size_t i = 0; i < family.lambdas.size(); ++i)
            csv << format_g17(family.omega) << ',' << family.k_list[i] << ','
                << format_g17(family.lambdas[i].real()) << ','
                << format_g17(family.lambdas[i].imag()) << "\n";
        write_text_file((s.out / "spectrum.csv").string(), csv.str());

        ordered_json j;
        j["manifest_hash"] = hash_hex(man.hash);
        j["omega"] = family.omega;
        j["A_phase"] = family.A_phase;
        j["B_drift"] = {family.B_drift.real(), family.B_drift.imag()};
        j["k"] = family.k_list;
        auto lambdas = ordered_json::array();
        for (const Cplx& l : family.lambdas) lambdas.push_back({l.real(), l.imag()});
        j["lambda"] = std::move(lambdas);
        if (oracle_skipped) j["oracle"] = ordered_json{{"skipped", "omega = 0"}};
        if (oracle_run) j["oracle"] = hunt_json(hunt);
        write_text_file((s.out / "spectrum.json").string(), j.dump(2) + "\n");

        if (oracle_run)
            write_text_file((s.out / "oracle.csv").string(),
                            oracle_csv_text(hunt, man.hash, s.n));

        finish_manifest(man, s, s.out / "spectrum_manifest.json");

        if (oracle_run && !any_seed_matched(family, hunt)) {
            std::cerr << "error: oracle matching failed wholesale: no branch seed "
                         "matched within 10% relative distance\n";
            return 3;
        }
        return 0;
    });
}

int cmd_margin(const CliOptions& opt) {
    return run_guarded([&]() -> int {
        RunSetup s = prepare(opt);
        Grid grid(s.n);
        const BaseFlow flow = solve_base_flow(s.params, grid, s.tol, s.cfg.max_outer);
        const LinearCoefficients coeffs = build_coefficients(flow, s.params);
        const StabilityReport report = stability_margin(coeffs);

        const std::vector<std::string> outputs = {"margin.json",
                                                  "margin_manifest.json"};
        RunManifest man =
            make_manifest("margin", canonical_inputs("margin", s, opt, outputs),
                          {s.n}, {{"tol", s.tol}}, outputs);

        ordered_json j;
        j["manifest_hash"] = hash_hex(man.hash);
        j["margin_form_A"] = report.margin_form_A;
        j["margin_form_B"] = report.margin_form_B;
        j["classification"] = report.classification;
        j["discrepancy"] = report.discrepancy;
        j["A_phase"] = report.A_phase;
        write_text_file((s.out / "margin.json").string(), j.dump(2) + "\n");

        finish_manifest(man, s, s.out / "margin_manifest.json");
        return 0;
    });
}

int cmd_oracle(const CliOptions& opt) {
    return run_guarded([&]() -> int {
        RunSetup s = prepare(opt);
        if (opt.k_hi < opt.k_lo) throw ValidationError("--k-hi must be >= --k-lo");
        Grid grid(s.n);
        const BaseFlow flow = solve_base_flow(s.params, grid, s.tol, s.cfg.max_outer);
        const LinearCoefficients coeffs = build_coefficients(flow, s.params);
        const EigenFamily family =
            asymptotic_eigenvalues(coeffs, s.omega, opt.k_lo, opt.k_hi);
        const Pencil pencil = assemble_pencil(coeffs, flow, s.params, s.omega, s.n);
        const HuntReport hunt = hunt_spectrum(pencil, family, s.tol, opt.jobs);

        const std::vector<std::string> outputs = {"oracle.csv", "oracle.json",
                                                  "oracle_manifest.json"};
        RunManifest man =
            make_manifest("oracle", canonical_inputs("oracle", s, opt, outputs),
                          {s.n}, {{"tol", s.tol}}, outputs);

        write_text_file((s.out / "oracle.csv").string(),
                        oracle_csv_text(hunt, man.hash, s.n));

        ordered_json j;
        j["manifest_hash"] = hash_hex(man.hash);
        j["omega"] = family.omega;
        j["A_phase"] = family.A_phase;
        j["grid_n"] = s.n;
        j["hunt"] = hunt_json(hunt);
        write_text_file((s.out / "oracle.json").string(), j.dump(2) + "\n");

        finish_manifest(man, s, s.out / "oracle_manifest.json");

        if (!any_seed_matched(family, hunt)) {
            std::cerr << "error: oracle matching failed wholesale: no branch seed "
                         "matched within 10% relative distance\n";
            return 3;
        }
        return 0;
    });
}

int cmd_sweep(const CliOptions& opt) {
    return run_guarded([&]() -> int {
        RunSetup s = prepare(opt);
        if (!s.cfg.sweep)
            throw ValidationError("config has no sweep section");
        const SweepSpec& spec = *s.cfg.sweep;

        std::vector<double> values = spec.values;
        std::sort(values.begin(), values.end());

        struct PointResult {
            double value = 0.0;
            bool ok = false;
            double form_a = std::numeric_limits<double>::quiet_NaN();
            double form_b = std::numeric_limits<double>::quiet_NaN();
            double a_phase = std::numeric_limits<double>::quiet_NaN();
            double discrepancy = std::numeric_limits<double>::quiet_NaN();
            std::string classification;
            std::string error;
        };

        const auto eval_point = [&](double v) {
            PointResult r;
            r.value = v;
            try {
                ModelParams p = spec.fixed;
                set_param_by_name(p, spec.axis, v);
                p.validate();
                Grid g(s.n);
                const BaseFlow flow = solve_base_flow(p, g, s.tol, s.cfg.max_outer);
                const LinearCoefficients coeffs = build_coefficients(flow, p);
                const StabilityReport rep = stability_margin(coeffs);
                r.ok = true;
                r.form_a = rep.margin_form_A;
                r.form_b = rep.margin_form_B;
                r.a_phase = rep.A_phase;
                r.discrepancy = rep.discrepancy;
                r.classification = rep.classification;
            } catch (const std::exception& e) {
                r.error = error_class_name(e);
            }
            return r;
        };

        std::vector<PointResult> rows(values.size());
        const int workers =
            std::max(1, std::min<int>(opt.jobs, static_cast<int>(values.size())));
        if (workers == 1) {
            for (std::size_t i = 0; i < values.size(); ++i) rows[i] = eval_point(values[i]);
        } else {
            std::atomic<std::size_t> next{0};
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (int w = 0; w < workers; ++w)
                pool.emplace_back([&] {
                    for (;;) {
                        const std::size_t i = next.fetch_add(1);
                        if (i >= values.size()) break;
                        rows[i] = eval_point(values[i]);
                    }
                });
            for (std::thread& th : pool) th.join();
        }

        // A sign change of the authoritative margin between neighbouring
        // converged points brackets a stability boundary; bisect it.
        struct Boundary {
            double lo, hi;
        };
        std::vector<Boundary> boundaries;
        for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
            const PointResult& a = rows[i];
            const PointResult& b = rows[i + 1];
            if (!a.ok || !b.ok) continue;
            if ((a.form_b < 0.0) == (b.form_b < 0.0)) continue;
            double lo = a.value, hi = b.value;
            bool lo_neg = a.form_b < 0.0;
            while (hi - lo >= 1e-6) {
                const double mid = 0.5 * (lo + hi);
                const PointResult m = eval_point(mid);
                if (!m.ok) break;  // report the bracket reached so far
                if ((m.form_b < 0.0) == lo_neg)
                    lo = mid;
                else
                    hi = mid;
            }
            boundaries.push_back({lo, hi});
        }

        const bool want_csv = std::find(spec.outputs.begin(), spec.outputs.end(),
                                        "csv") != spec.outputs.end();
        const bool want_json = std::find(spec.outputs.begin(), spec.outputs.end(),
                                         "json") != spec.outputs.end();
        const bool want_svg = std::find(spec.outputs.begin(), spec.outputs.end(),
                                        "svg") != spec.outputs.end();
        std::vector<std::string> outputs;
        if (want_csv) outputs.push_back("sweep.csv");
        if (want_json) outputs.push_back("sweep.json");
        if (want_svg) outputs.push_back("sweep.svg");
        outputs.push_back("sweep_manifest.json");
        RunManifest man = make_manifest(
            "sweep", canonical_inputs("sweep", s, opt, outputs), {s.n},
            {{"tol", s.tol}, {"boundary_tol", 1e-6}}, outputs);

        if (want_csv) {
            std::ostringstream csv;
            csv << "# manifest-hash: " << hash_hex(man.hash) << "\n"
                << "# axis: " << spec.axis << "\n";
            for (const Boundary& b : boundaries)
                csv << "# boundary: lo=" << format_g17(b.lo)
                    << " hi=" << format_g17(b.hi) << "\n";
            csv << spec.axis
                << ",margin_form_A,margin_form_B,classification,A_phase,error\n";
            for (const PointResult& r : rows)
                csv << format_g17(r.value) << ',' << format_g17(r.form_a) << ','
                    << format_g17(r.form_b) << ',' << r.classification << ','
                    << format_g17(r.a_phase) << ',' << r.error << "\n";
            write_text_file((s.out / "sweep.csv").string(), csv.str());
        }

        if (want_json) {
            ordered_json j;
            j["manifest_hash"] = hash_hex(man.hash);
            j["axis"] = spec.axis;
            auto jrows = ordered_json::array();
            for (const PointResult& r : rows) {
                ordered_json e;
                e["value"] = r.value;
                if (r.ok) {
                    e["margin_form_A"] = r.form_a;
                    e["margin_form_B"] = r.form_b;
                    e["classification"] = r.classification;
                    e["discrepancy"] = r.discrepancy;
                    e["A_phase"] = r.a_phase;
                } else {
                    e["error"] = r.error;
                }
                jrows.push_back(std::move(e));
            }
            j["rows"] = std::move(jrows);
            auto jb = ordered_json::array();
            for (const Boundary& b : boundaries)
                jb.push_back(ordered_json{{"lo", b.lo},
                                          {"hi", b.hi},
                                          {"value", 0.5 * (b.lo + b.hi)}});
            j["boundaries"] = std::move(jb);
            write_text_file((s.out / "sweep.json").string(), j.dump(2) + "\n");
        }

        if (want_svg) {
            std::vector<double> xs, ys;
            for (const PointResult& r : rows)
                if (r.ok) {
                    xs.push_back(r.value);
                    ys.push_back(r.form_b);
                }
            std::string msg;
            if (!emit_profile_svg((s.out / "sweep.svg").string(), "Stability margin",
                                  spec.axis, "margin_form_B", xs, ys, man.hash, &msg))
                std::cerr << "warning: " << msg << "\n";
        }

        finish_manifest(man, s, s.out / "sweep_manifest.json");
        return 0;
    });
}

}  // namespace vmflow
