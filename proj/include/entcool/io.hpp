// Copyright 2026 The entcool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <iterator>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include <json.hpp>

#include "entcool/cooling.hpp"

namespace entcool::io {

/// Shortest decimal that round-trips the double.
inline std::string fmt_double(double v) {
    char buf[32];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline std::string cell(double v) { return fmt_double(v); }
inline std::string cell(int v) { return std::to_string(v); }
inline std::string cell(std::size_t v) { return std::to_string(v); }
inline std::string cell(std::string s) { return s; }
inline std::string cell(const char* s) { return s; }

/// Minimal CSV table: a fixed header and rows of preformatted cells.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> cells) {
        if (cells.size() != header_.size()) {
            throw std::logic_error("CsvTable: row has " + std::to_string(cells.size()) +
                                   " cells, header has " + std::to_string(header_.size()));
        }
        rows_.push_back(std::move(cells));
    }

    std::string str() const {
        std::string out;
        auto line = [&](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
        return out;
    }

    const std::vector<std::string>& header() const noexcept { return header_; }
    std::size_t size() const noexcept { return rows_.size(); }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << content;
    if (!f) throw std::runtime_error("write failed: " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

/// First line of a CSV file split on commas.
inline std::vector<std::string> read_csv_header(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("missing file: " + path.string());
    std::string line;
    std::getline(f, line);
    std::vector<std::string> cols;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    return cols;
}

inline std::string sha256_hex(const std::string& data) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

inline nlohmann::json to_json(const TrajectoryRecord& r) {
    std::string accepts;
    accepts.reserve(r.accept_trace.size());
    for (bool b : r.accept_trace) accepts += b ? '1' : '0';
    nlohmann::json spectra = nlohmann::json::array();
    for (const auto& s : r.final_spectra) {
        spectra.push_back({{"block_start", s.block.start},
                           {"block_length", s.block.length},
                           {"eigenvalues", s.eigenvalues}});
    }
    return {{"trajectory", r.trajectory_index}, {"seed", r.seed},
            {"accepted_count", r.accepted_count}, {"entropy_trace", r.entropy_trace},
            {"accept_trace", accepts},           {"final_spectra", spectra}};
}

inline TrajectoryRecord trajectory_from_json(const nlohmann::json& j) {
    TrajectoryRecord r;
    r.trajectory_index = j.at("trajectory").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.accepted_count = j.at("accepted_count").get<int>();
    r.entropy_trace = j.at("entropy_trace").get<std::vector<double>>();
    for (char c : j.at("accept_trace").get<std::string>()) r.accept_trace.push_back(c == '1');
    for (const auto& s : j.at("final_spectra")) {
        r.final_spectra.push_back({s.at("eigenvalues").get<std::vector<double>>(),
                                   {s.at("block_start").get<int>(), s.at("block_length").get<int>()}});
    }
    return r;
}

/// One JSON object per line, in trajectory order.
inline std::string trajectory_jsonl(const std::vector<TrajectoryRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += to_json(r).dump();
        out += '\n';
    }
    return out;
}

}  // namespace entcool::io
