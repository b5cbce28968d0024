/*
   Copyright 2026 The whc authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

/// Batch front door.  `run` parses a command line, reads symbol files, runs
/// the requested analysis, and returns an exit code plus a JSON report (and
/// CSV for the table-producing subcommands).  Exit codes: 0 pass/success,
/// 1 fail or not canonical, 2 inapplicable/boundary/unstable/non-convergent,
/// 3 input error.  The environment variable WHC_GRID overrides the default
/// evaluation grid where one applies; an explicit --grid flag wins over it.
/// Reports embed a sha256 of every input read, so a run can be audited
/// byte-for-byte; everything in the report except `timings` is deterministic
/// for fixed inputs.

#pragma once

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "whc/blockstruct.hpp"
#include "whc/certify.hpp"
#include "whc/factorize.hpp"
#include "whc/hankel.hpp"
#include "whc/io.hpp"
#include "whc/numrange.hpp"
#include "whc/trigpoly.hpp"

namespace whc::cli {

struct RunOutcome {
    int exit_code = 0;
    nlohmann::json report;
    std::string csv;         // filled by `numrange` and `report`
    std::string report_path; // nonempty when --out wrote the report
    std::string csv_path;    // nonempty when --csv wrote the table
};

namespace detail {

inline int env_grid() {
    const char* s = std::getenv("WHC_GRID");
    if (s == nullptr || *s == '\0') return 0;
    char* end = nullptr;
    long v = std::strtol(s, &end, 10);
    if (end == nullptr || *end != '\0' || v < 0)
        throw std::invalid_argument(
            "WHC_GRID must be a nonnegative integer, got: " + std::string(s));
    return (int)v;
}

inline int exit_for(Verdict v) {
    switch (v) {
        case Verdict::Pass: return 0;
        case Verdict::Fail: return 1;
        case Verdict::Inapplicable:
        case Verdict::Boundary: return 2;
    }
    return 2;
}

inline int exit_for(FactorizeStatus s) {
    switch (s) {
        case FactorizeStatus::Accepted: return 0;
        case FactorizeStatus::NotCanonical: return 1;
        case FactorizeStatus::NonConvergent: return 2;
    }
    return 2;
}

inline Certificate dispatch_certify(const std::string& theorem,
                                    const BlockSymbol& bs, int grid,
                                    int ndirs) {
    if (theorem == "thcan") return certify_thcan(bs, grid, ndirs);
    if (theorem == "thcir") return certify_thcir(bs, grid, ndirs);
    if (theorem == "thneg") return certify_thneg(bs, std::nullopt, grid);
    if (theorem == "cok1") return certify_cok1(bs, grid);
    if (theorem == "exact") return certify_exact(bs);
    throw std::invalid_argument(
        "unknown theorem '" + theorem +
        "' (expected thcan|thcir|thneg|cok1|exact)");
}

inline nlohmann::json base_report(const std::string& command,
                                  const std::vector<std::string>& paths) {
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& p : paths)
        inputs.push_back({{"path", p}, {"sha256", sha256_file(p)}});
    return nlohmann::json{{"schema_version", 1},
                          {"command", command},
                          {"inputs", std::move(inputs)}};
}

inline std::string csv_cell(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string quoted = "\"";
    for (char c : v) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    quoted += "\"";
    return quoted;
}

inline std::string join_indices(const std::vector<int>& idx) {
    std::string s;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) s.push_back(';');
        s += std::to_string(idx[i]);
    }
    return s;
}

/// One row of the aggregated report table.  Cells stay empty when the
/// quantity does not apply to the command that produced the row.
struct ReportRow {
    std::string file, theorem, verdict, alpha, plo, phi, total_index,
        partial_indices, residual, error;

    std::string to_csv() const {
        std::ostringstream os;
        os << 1 << ',' << csv_cell(file) << ',' << csv_cell(theorem) << ','
           << csv_cell(verdict) << ',' << alpha << ',' << plo << ',' << phi
           << ',' << total_index << ',' << csv_cell(partial_indices) << ','
           << residual << ',' << csv_cell(error);
        return os.str();
    }
};

inline const char* report_header() {
    return "schema_version,file,theorem,verdict,alpha,plo,phi,total_index,"
           "partial_indices,residual,error";
}

inline void fill_from_certificate(ReportRow& row, const Certificate& cert) {
    row.theorem = cert.theorem;
    row.verdict = to_string(cert.verdict);
    if (cert.pinterval) {
        row.alpha = format_sig17(cert.pinterval->alpha);
        row.plo = format_sig17(cert.pinterval->plo);
        row.phi = format_sig17(cert.pinterval->phi);
    } else if (cert.details.count("alpha")) {
        row.alpha = format_sig17(cert.details.at("alpha"));
    }
    if (cert.winding) row.total_index = std::to_string(*cert.winding);
}

inline void fill_from_factorization(ReportRow& row,
                                    const FactorizationResult& fr) {
    row.theorem = "factorize";
    row.verdict = to_string(fr.status);
    row.total_index = std::to_string(fr.total);
    row.partial_indices = join_indices(fr.partial);
    row.residual = format_sig17(fr.residual);
}

} // namespace detail

/// Execute one command line (without the program name).  Never throws:
/// problems are encoded in the exit code and the report's "error" field.
inline RunOutcome run(const std::vector<std::string>& args) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    RunOutcome out;

    CLI::App app{"certify and factorize structured matrix symbols on the unit "
                 "circle"};
    app.name("whc");
    app.require_subcommand(1);

    std::string file, rhs_file, manifest_file, out_path, csv_path;
    std::string theorem = "thcan";
    int grid = 0, ndirs = 256, trunc = 32, hankel_trunc = 0;
    double tol = 1e-8, at_angle = 0.0;

    auto add_out = [&](CLI::App* sub) {
        sub->add_option("--out", out_path, "write the JSON report to this file");
    };

    CLI::App* c_certify =
        app.add_subcommand("certify", "run a certificate on a block symbol");
    c_certify->add_option("file", file, "block symbol JSON file")->required();
    c_certify->add_option("--theorem", theorem,
                          "thcan|thcir|thneg|cok1|exact (default thcan)");
    c_certify->add_option("--grid", grid,
                          "evaluation grid size (0 = default / WHC_GRID)");
    c_certify->add_option("--ndirs", ndirs,
                          "numerical range directions (default 256)");
    add_out(c_certify);

    CLI::App* c_factorize = app.add_subcommand(
        "factorize", "attempt a canonical factorization of a symbol");
    c_factorize->add_option("file", file, "symbol JSON file (block files are assembled)")
        ->required();
    c_factorize->add_option("--trunc", trunc, "truncation blocks (default 32)");
    c_factorize->add_option("--tol", tol, "acceptance tolerance (default 1e-8)");
    add_out(c_factorize);

    CLI::App* c_solverh = app.add_subcommand(
        "solve-rh", "solve phi+ = G phi- + g given symbol and data files");
    c_solverh->add_option("file", file, "symbol JSON file")->required();
    c_solverh->add_option("rhs", rhs_file, "right-hand side symbol JSON file")
        ->required();
    c_solverh->add_option("--trunc", trunc, "truncation blocks (default 32)");
    c_solverh->add_option("--tol", tol, "acceptance tolerance (default 1e-8)");
    add_out(c_solverh);

    CLI::App* c_hankel = app.add_subcommand(
        "hankel", "singular values of the Hankel matrix of a symbol");
    c_hankel->add_option("file", file, "symbol JSON file")->required();
    c_hankel->add_option("--trunc", hankel_trunc,
                         "truncation (0 = exact default)");
    add_out(c_hankel);

    CLI::App* c_numrange = app.add_subcommand(
        "numrange", "numerical range boundary table of the symbol at a point");
    c_numrange->add_option("file", file, "symbol JSON file")->required();
    c_numrange->add_option("--ndirs", ndirs, "directions (default 256)");
    c_numrange->add_option("--at", at_angle,
                           "evaluation angle theta in radians (default 0)");
    c_numrange->add_option("--csv", csv_path, "write the table to this file");
    add_out(c_numrange);

    CLI::App* c_report = app.add_subcommand(
        "report", "aggregate a manifest of runs into a CSV table");
    c_report->add_option("manifest", manifest_file, "manifest JSON file")
        ->required();
    c_report->add_option("--csv", csv_path, "write the table to this file");
    add_out(c_report);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out.report = nlohmann::json{{"help", app.help()}};
        out.exit_code = 0;
        return out;
    } catch (const CLI::ParseError& e) {
        out.report = nlohmann::json{{"error", e.what()}};
        out.exit_code = 3;
        return out;
    }

    try {
        if (c_certify->parsed()) {
            int g = grid != 0 ? grid : detail::env_grid();
            auto bs = load_block_symbol(file);
            auto cert = detail::dispatch_certify(theorem, bs, g, ndirs);
            out.report = detail::base_report("certify", {file});
            out.report["flags"] = {{"theorem", theorem},
                                   {"grid", g},
                                   {"ndirs", ndirs}};
            out.report["outputs"]["certificate"] = certificate_to_json(cert);
            out.exit_code = detail::exit_for(cert.verdict);
        } else if (c_factorize->parsed()) {
            auto G = load_symbol(file);
            auto fr = canonical_factorize(G, trunc, tol);
            out.report = detail::base_report("factorize", {file});
            out.report["flags"] = {{"trunc", trunc}, {"tol", tol}};
            out.report["outputs"]["factorization"] = factorization_to_json(fr);
            out.exit_code = detail::exit_for(fr.status);
        } else if (c_solverh->parsed()) {
            auto G = load_symbol(file);
            auto g = load_symbol(rhs_file);
            auto fr = canonical_factorize(G, trunc, tol);
            out.report = detail::base_report("solve-rh", {file, rhs_file});
            out.report["flags"] = {{"trunc", trunc}, {"tol", tol}};
            out.report["outputs"]["factorization"] = factorization_to_json(fr);
            if (fr.status != FactorizeStatus::Accepted) {
                out.exit_code = detail::exit_for(fr.status);
            } else {
                auto sol = solve_rh_factored(fr, G, g, tol);
                out.report["outputs"]["solution"] = rh_to_json(sol);
                out.exit_code = 0;
            }
        } else if (c_hankel->parsed()) {
            auto b = load_symbol(file);
            auto hs = hankel_sq_spectrum(b, hankel_trunc);
            out.report = detail::base_report("hankel", {file});
            out.report["flags"] = {{"trunc", hankel_trunc}};
            out.report["outputs"]["spectrum"] = hankel_to_json(hs);
            if (b.rows() == 1 && b.cols() == 1)
                out.report["outputs"]["nehari"] = nehari_distance(b);
            out.exit_code = 0;
        } else if (c_numrange->parsed()) {
            auto f = load_symbol(file);
            Eigen::MatrixXcd M = f.eval(std::polar(1.0, at_angle));
            auto nb = nr_boundary(M, ndirs);
            std::ostringstream csv;
            csv << "theta,support,bnd_re,bnd_im\n";
            for (int u = 0; u < nb.ndirs; ++u)
                csv << format_sig17(nb.theta(u)) << ','
                    << format_sig17(nb.support[u]) << ','
                    << format_sig17(nb.bndpoints[u].real()) << ','
                    << format_sig17(nb.bndpoints[u].imag()) << '\n';
            out.csv = csv.str();
            out.report = detail::base_report("numrange", {file});
            out.report["flags"] = {{"ndirs", ndirs}, {"at", at_angle}};
            out.report["outputs"]["rows"] = nb.ndirs;
            out.exit_code = 0;
        } else if (c_report->parsed()) {
            auto manifest = read_json_file(manifest_file);
            nlohmann::json runs = manifest.is_array()
                                      ? manifest
                                      : manifest.value("runs",
                                                       nlohmann::json::array());
            std::ostringstream csv;
            csv << detail::report_header() << '\n';
            bool input_error = false;
            int nrows = 0;
            for (const auto& entry : runs) {
                detail::ReportRow row;
                try {
                    if (!entry.is_object() || !entry.contains("file"))
                        throw std::invalid_argument(
                            "manifest entry without a 'file' field");
                    row.file = entry.at("file").get<std::string>();
                    std::string cmd = entry.value("command", "certify");
                    if (cmd == "certify") {
                        auto bs = load_block_symbol(row.file);
                        int g = entry.value("grid", 0);
                        if (g == 0) g = detail::env_grid();
                        auto cert = detail::dispatch_certify(
                            entry.value("theorem", std::string("thcan")), bs,
                            g, entry.value("ndirs", 256));
                        detail::fill_from_certificate(row, cert);
                    } else if (cmd == "factorize") {
                        auto G = load_symbol(row.file);
                        auto fr = canonical_factorize(
                            G, entry.value("trunc", 32),
                            entry.value("tol", 1e-8));
                        detail::fill_from_factorization(row, fr);
                    } else if (cmd == "solve-rh") {
                        auto G = load_symbol(row.file);
                        auto g = load_symbol(entry.at("rhs").get<std::string>());
                        auto sol = solve_rh(G, g, entry.value("trunc", 32),
                                            entry.value("tol", 1e-8));
                        row.theorem = "solve-rh";
                        row.verdict = "ok";
                        row.residual = format_sig17(sol.residual);
                    } else if (cmd == "hankel") {
                        auto b = load_symbol(row.file);
                        auto hs = hankel_sq_spectrum(b, entry.value("trunc", 0));
                        row.theorem = "hankel";
                        row.verdict = hs.exact ? "exact" : "truncated";
                    } else {
                        throw std::invalid_argument("unknown command '" + cmd +
                                                    "' in manifest");
                    }
                } catch (const std::invalid_argument& e) {
                    row.error = e.what();
                    input_error = true;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                csv << row.to_csv() << '\n';
                ++nrows;
            }
            out.csv = csv.str();
            out.report = detail::base_report("report", {manifest_file});
            out.report["outputs"]["rows"] = nrows;
            out.exit_code = input_error ? 3 : 0;
        }

        if (!out_path.empty()) {
            out.report["timings"] = {
                {"total_seconds",
                 std::chrono::duration<double>(clock::now() - t0).count()}};
            write_json_file(out_path, out.report);
            out.report_path = out_path;
        }
        if (!csv_path.empty() && !out.csv.empty()) {
            std::ofstream f(csv_path);
            if (!f)
                throw std::invalid_argument("cannot open file for writing: " +
                                            csv_path);
            f << out.csv;
            out.csv_path = csv_path;
        }
    } catch (const std::invalid_argument& e) {
        out.report["error"] = e.what();
        out.exit_code = 3;
    } catch (const std::exception& e) {
        out.report["error"] = e.what();
        out.exit_code = 2;
    }

    out.report["timings"] = {
        {"total_seconds",
         std::chrono::duration<double>(clock::now() - t0).count()}};
    return out;
}

} // namespace whc::cli
