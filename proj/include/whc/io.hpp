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

/// JSON readers/writers for symbols and block symbols, serializers for the
/// result types, content hashing for auditable reports, and the fixed-width
/// float formatting used by the CSV outputs.
///
/// Symbol schema:
///   { "rows": n, "cols": m, "kmin": a, "kmax": b,
///     "coeffs": [ [[ [re, im], ... ]], ... ] }
/// with coeffs ordered k = kmin..kmax and each coefficient stored row-major.
/// Block symbol schema: { "A": <symbol>, "B": <symbol>, "D": <symbol> }.
/// Readers reject malformed input with the offending index in the message.

#pragma once

#include <json.hpp>
#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "whc/blockstruct.hpp"
#include "whc/certify.hpp"
#include "whc/factorize.hpp"
#include "whc/hankel.hpp"
#include "whc/trigpoly.hpp"

namespace whc {

/// Fixed 17-significant-digit rendering, enough to reproduce any double
/// bit-exactly on read-back.
inline std::string format_sig17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

inline std::string sha256_hex(const void* data, std::size_t len) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int mdlen = 0;
    if (EVP_Digest(data, len, md, &mdlen, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256_hex: digest failed");
    static const char* hexdig = "0123456789abcdef";
    std::string out;
    out.reserve(2 * mdlen);
    for (unsigned int i = 0; i < mdlen; ++i) {
        out.push_back(hexdig[md[i] >> 4]);
        out.push_back(hexdig[md[i] & 0xf]);
    }
    return out;
}

inline std::string sha256_hex(const std::string& bytes) {
    return sha256_hex(bytes.data(), bytes.size());
}

inline std::string sha256_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return sha256_hex(buf.str());
}

inline nlohmann::json symbol_to_json(const LaurentMatrixPoly& f) {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int k = f.kmin(); k <= f.kmax(); ++k) {
        const Eigen::MatrixXcd& c = f.at(k);
        nlohmann::json rows = nlohmann::json::array();
        for (int i = 0; i < f.rows(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (int j = 0; j < f.cols(); ++j)
                row.push_back({c(i, j).real(), c(i, j).imag()});
            rows.push_back(std::move(row));
        }
        coeffs.push_back(std::move(rows));
    }
    return nlohmann::json{{"rows", f.rows()},
                          {"cols", f.cols()},
                          {"kmin", f.kmin()},
                          {"kmax", f.kmax()},
                          {"coeffs", std::move(coeffs)}};
}

inline LaurentMatrixPoly symbol_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw std::invalid_argument("symbol: expected a JSON object");
    for (const char* key : {"rows", "cols", "kmin", "kmax"})
        if (!j.contains(key) || !j.at(key).is_number_integer()) {
            std::ostringstream os;
            os << "symbol: field '" << key << "' missing or not an integer";
            throw std::invalid_argument(os.str());
        }
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const int kmin = j.at("kmin").get<int>();
    const int kmax = j.at("kmax").get<int>();
    if (!j.contains("coeffs") || !j.at("coeffs").is_array())
        throw std::invalid_argument("symbol: field 'coeffs' missing or not an array");
    const auto& coeffs = j.at("coeffs");
    const std::size_t expected = (kmin <= kmax) ? (std::size_t)(kmax - kmin + 1) : 0;
    if (coeffs.size() != expected) {
        std::ostringstream os;
        os << "symbol: coeffs has " << coeffs.size() << " entries, expected "
           << expected << " for kmin = " << kmin << ", kmax = " << kmax;
        throw std::invalid_argument(os.str());
    }
    std::vector<Eigen::MatrixXcd> cs;
    cs.reserve(expected);
    for (std::size_t idx = 0; idx < coeffs.size(); ++idx) {
        const int k = kmin + (int)idx;
        const auto& mat = coeffs[idx];
        if (!mat.is_array() || (int)mat.size() != rows) {
            std::ostringstream os;
            os << "symbol: coefficient k = " << k << " has "
               << (mat.is_array() ? std::to_string(mat.size()) : "no")
               << " rows, expected " << rows;
            throw std::invalid_argument(os.str());
        }
        Eigen::MatrixXcd c(rows, cols);
        for (int r = 0; r < rows; ++r) {
            const auto& rowv = mat[(std::size_t)r];
            if (!rowv.is_array() || (int)rowv.size() != cols) {
                std::ostringstream os;
                os << "symbol: coefficient k = " << k << ", row " << r
                   << ": expected " << cols << " entries";
                throw std::invalid_argument(os.str());
            }
            for (int cidx = 0; cidx < cols; ++cidx) {
                const auto& cell = rowv[(std::size_t)cidx];
                if (!cell.is_array() || cell.size() != 2 ||
                    !cell[0].is_number() || !cell[1].is_number()) {
                    std::ostringstream os;
                    os << "symbol: coefficient k = " << k << ", row " << r
                       << ", col " << cidx << ": expected [re, im]";
                    throw std::invalid_argument(os.str());
                }
                c(r, cidx) = Complex(cell[0].get<double>(), cell[1].get<double>());
            }
        }
        cs.push_back(std::move(c));
    }
    return LaurentMatrixPoly(rows, cols, kmin, kmax, std::move(cs));
}

inline nlohmann::json block_symbol_to_json(const BlockSymbol& bs) {
    return nlohmann::json{{"A", symbol_to_json(bs.A)},
                          {"B", symbol_to_json(bs.B)},
                          {"D", symbol_to_json(bs.D)}};
}

inline BlockSymbol block_symbol_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw std::invalid_argument("block symbol: expected a JSON object");
    for (const char* key : {"A", "B", "D"})
        if (!j.contains(key)) {
            std::ostringstream os;
            os << "block symbol: missing field '" << key << "'";
            throw std::invalid_argument(os.str());
        }
    auto parse_part = [&](const char* key) {
        try {
            return symbol_from_json(j.at(key));
        } catch (const std::invalid_argument& e) {
            std::ostringstream os;
            os << "block " << key << ": " << e.what();
            throw std::invalid_argument(os.str());
        }
    };
    BlockSymbol bs{parse_part("A"), parse_part("B"), parse_part("D")};
    bs.validate();
    return bs;
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
    out << j.dump(2) << '\n';
}

inline bool looks_like_block_symbol(const nlohmann::json& j) {
    return j.is_object() && j.contains("A") && j.contains("B") && j.contains("D");
}

inline BlockSymbol load_block_symbol(const std::string& path) {
    auto j = read_json_file(path);
    try {
        return block_symbol_from_json(j);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

/// Load a plain symbol; a block-symbol file is accepted and assembled.
inline LaurentMatrixPoly load_symbol(const std::string& path) {
    auto j = read_json_file(path);
    try {
        if (looks_like_block_symbol(j)) return assemble(block_symbol_from_json(j));
        return symbol_from_json(j);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

inline nlohmann::json pinterval_to_json(const PInterval& p) {
    nlohmann::json j{{"plo", p.plo}, {"alpha", p.alpha}};
    if (std::isinf(p.phi))
        j["phi"] = nullptr;
    else
        j["phi"] = p.phi;
    return j;
}

inline nlohmann::json certificate_to_json(const Certificate& cert) {
    nlohmann::json j{{"theorem", cert.theorem},
                     {"verdict", to_string(cert.verdict)},
                     {"claims", cert.claims},
                     {"note", cert.note},
                     {"grid", cert.grid}};
    j["pinterval"] =
        cert.pinterval ? pinterval_to_json(*cert.pinterval) : nlohmann::json();
    j["winding"] = cert.winding ? nlohmann::json(*cert.winding) : nlohmann::json();
    nlohmann::json details = nlohmann::json::object();
    for (const auto& [key, value] : cert.details) details[key] = value;
    j["details"] = std::move(details);
    return j;
}

inline nlohmann::json factorization_to_json(const FactorizationResult& fr) {
    nlohmann::json profile = nlohmann::json::array();
    for (const auto& [blocks, cond] : fr.condprofile)
        profile.push_back({{"blocks", blocks}, {"cond", cond}});
    nlohmann::json j{{"status", to_string(fr.status)},
                     {"residual", fr.residual},
                     {"tail", fr.tail},
                     {"partial", fr.partial},
                     {"total", fr.total},
                     {"lambda", fr.lambda_count},
                     {"eta", fr.eta_count},
                     {"condprofile", std::move(profile)},
                     {"note", fr.note},
                     {"grid", fr.grid}};
    if (fr.status == FactorizeStatus::Accepted) {
        j["gplus"] = symbol_to_json(fr.gplus);
        j["gminus"] = symbol_to_json(fr.gminus);
    } else {
        j["gplus"] = nullptr;
        j["gminus"] = nullptr;
    }
    return j;
}

inline nlohmann::json rh_to_json(const RHSolution& sol) {
    return nlohmann::json{{"phiplus", symbol_to_json(sol.phiplus)},
                          {"phiminus", symbol_to_json(sol.phiminus)},
                          {"residual", sol.residual},
                          {"grid", sol.grid}};
}

inline nlohmann::json hankel_to_json(const HankelSpectrum& hs) {
    return nlohmann::json{{"truncation", hs.truncation},
                          {"exact", hs.exact},
                          {"singvals", hs.singvals},
                          {"norm", hs.singvals.empty() ? 0.0 : hs.singvals.front()}};
}

inline nlohmann::json concordance_to_json(const ConcordanceReport& rep) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : rep.checks)
        checks.push_back(
            {{"claim", c.claim}, {"status", c.status}, {"note", c.note}});
    return nlohmann::json{{"contradiction", rep.contradiction},
                          {"checks", std::move(checks)}};
}

} // namespace whc
