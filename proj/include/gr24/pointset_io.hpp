#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gr24/energy.hpp"
#include "gr24/errors.hpp"
#include "gr24/frame.hpp"

namespace gr24 {

inline constexpr const char* pointset_format_id = "gr24-frames-v1";
inline constexpr const char* tool_version = "0.1.0";

namespace detail {

/// Round-trip-exact decimal rendering of a double (17 significant digits).
inline std::string dtos(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline Frame frame_from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.size() != 4) throw IoError("point-set: each point needs 4 rows");
    Mat42 m;
    for (int r = 0; r < 4; ++r) {
        if (rows[r].size() != 2) throw IoError("point-set: each row needs 2 columns");
        m(r, 0) = rows[r][0];
        m(r, 1) = rows[r][1];
    }
    Mat2 g = m.transpose() * m - Mat2::Identity();
    if (g.cwiseAbs().maxCoeff() > 1e-6)
        throw IoError("point-set: frame Gram deviation exceeds 1e-6");
    return Frame::orthonormalize(m);
}

} // namespace detail

/// Run manifest carried by every output file (embedded for JSON, sidecar
/// for CSV).
inline nlohmann::json make_manifest(const std::string& command, const nlohmann::json& parameters,
                                    std::uint64_t seed, const std::string& timestamp) {
    return nlohmann::json{{"command", command},
                          {"parameters", parameters},
                          {"seed", seed},
                          {"tool_version", tool_version},
                          {"timestamp", timestamp}};
}

inline nlohmann::json pointset_to_json(const Configuration& config, const nlohmann::json& manifest = {}) {
    nlohmann::json points = nlohmann::json::array();
    for (const Frame& f : config.points) {
        nlohmann::json rows = nlohmann::json::array();
        for (int r = 0; r < 4; ++r)
            rows.push_back({f.matrix()(r, 0), f.matrix()(r, 1)});
        points.push_back(rows);
    }
    nlohmann::json doc{{"format", pointset_format_id}, {"points", points}};
    if (!manifest.is_null() && !manifest.empty()) doc["manifest"] = manifest;
    return doc;
}

inline Configuration pointset_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || doc.value("format", "") != pointset_format_id)
        throw IoError("point-set: missing or unknown format tag");
    if (!doc.contains("points") || !doc["points"].is_array())
        throw IoError("point-set: missing points array");
    Configuration config;
    for (const auto& pt : doc["points"]) {
        std::vector<std::vector<double>> rows;
        for (const auto& row : pt) rows.push_back(row.get<std::vector<double>>());
        config.points.push_back(detail::frame_from_rows(rows));
    }
    return config;
}

inline void write_pointset_json(const std::string& path, const Configuration& config,
                                const nlohmann::json& manifest = {}) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << pointset_to_json(config, manifest).dump(2) << "\n";
}

inline Configuration read_pointset_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("point-set: JSON parse error: ") + e.what());
    }
    return pointset_from_json(doc);
}

/// CSV alternative: one point per line, 8 column-major entries
/// (x00,x10,x20,x30,x01,x11,x21,x31), 17 significant digits.
inline void write_pointset_csv(const std::string& path, const Configuration& config) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    for (const Frame& f : config.points) {
        for (int c = 0; c < 2; ++c)
            for (int r = 0; r < 4; ++r)
                out << detail::dtos(f.matrix()(r, c)) << (c == 1 && r == 3 ? "" : ",");
        out << "\n";
    }
}

inline Configuration read_pointset_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open: " + path);
    Configuration config;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::vector<double> vals;
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                vals.push_back(std::stod(tok));
            } catch (const std::exception&) {
                throw IoError("point-set CSV: bad number '" + tok + "'");
            }
        }
        if (vals.size() != 8) throw IoError("point-set CSV: each line needs 8 values");
        std::vector<std::vector<double>> rows(4, std::vector<double>(2));
        for (int c = 0; c < 2; ++c)
            for (int r = 0; r < 4; ++r) rows[r][c] = vals[4 * c + r];
        config.points.push_back(detail::frame_from_rows(rows));
    }
    return config;
}

} // namespace gr24
