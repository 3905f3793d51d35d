#include "gll/io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>

#include "gll/error.hpp"

namespace gll {

std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

namespace {

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw Error(ErrorCode::BadParams, "malformed number '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticsRecord> records) {
    os << kDiagnosticsHeader << '\n';
    for (const auto& r : records) {
        const double row[] = {r.t,   r.e1,  r.e2,     r.e3,           r.h12,
                              r.h22, r.w32, r.sup_ux, r.constraint_err, r.de2_residual};
        for (std::size_t i = 0; i < std::size(row); ++i) os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kDiagnosticsHeader) {
        throw Error(ErrorCode::BadParams, "diagnostics CSV header mismatch");
    }
    std::vector<DiagnosticsRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 10) throw Error(ErrorCode::BadParams, "diagnostics row needs 10 columns");
        DiagnosticsRecord r;
        double* dst[] = {&r.t,   &r.e1,  &r.e2,     &r.e3,           &r.h12,
                         &r.h22, &r.w32, &r.sup_ux, &r.constraint_err, &r.de2_residual};
        for (std::size_t i = 0; i < 10; ++i) *dst[i] = parse_double(f[i]);
        out.push_back(r);
    }
    return out;
}

nlohmann::json field_to_json(const SphereField& u, std::optional<std::uint64_t> seed) {
    nlohmann::json samples = nlohmann::json::array();
    for (std::size_t i = 0; i < u.n_points(); ++i) {
        const auto p = u.node(i);
        samples.push_back(std::vector<double>(p.begin(), p.end()));
    }
    nlohmann::json j;
    j["n_points"] = u.n_points();
    j["sphere_dim"] = u.sphere_dim();
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    j["samples"] = std::move(samples);
    return j;
}

SphereField field_from_json(const nlohmann::json& j) {
    try {
        const auto n = j.at("n_points").get<std::size_t>();
        const auto sd = j.at("sphere_dim").get<std::size_t>();
        const auto& samples = j.at("samples");
        if (samples.size() != n) throw Error(ErrorCode::DimensionMismatch, "samples length differs from n_points");
        std::vector<double> data;
        data.reserve(n * (sd + 1));
        for (const auto& row : samples) {
            if (row.size() != sd + 1) throw Error(ErrorCode::DimensionMismatch, "sample row has wrong length");
            for (const auto& x : row) data.push_back(x.get<double>());
        }
        return SphereField(PeriodicGrid(n), sd, std::move(data));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::BadParams, std::string("field JSON: ") + e.what());
    }
}

void write_table_csv(std::ostream& os, std::span<const std::string> columns,
                     std::span<const std::vector<double>> rows) {
    for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_double(row[i]);
        os << '\n';
    }
}

}  // namespace gll
