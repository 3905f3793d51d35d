#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "gll/error.hpp"
#include "gll/grid.hpp"
#include "gll/io.hpp"

namespace gll::cli {

namespace {

enum class Kind { Real, Signed, Unsigned, Text, RealList, UnsignedList };

struct KeyInfo {
    std::string_view name;
    Kind kind;
};

constexpr KeyInfo kKeys[] = {
    {"form", Kind::Text},          {"epsilon", Kind::Real},        {"potential", Kind::RealList},
    {"t_end", Kind::Real},         {"cfl", Kind::Real},            {"scheme", Kind::Text},
    {"sample_every", Kind::Signed}, {"n_points", Kind::Unsigned},  {"sphere_dim", Kind::Unsigned},
    {"initial", Kind::Text},       {"amplitude", Kind::Real},      {"n_modes", Kind::Signed},
    {"decay", Kind::Real},         {"seed", Kind::Unsigned},       {"out", Kind::Text},
    {"threads", Kind::Unsigned},   {"sample_dt", Kind::Real},      {"n_list", Kind::UnsignedList},
    {"epsilons", Kind::RealList},  {"delta", Kind::Real},
};

[[noreturn]] void fail(std::string_view key, const std::string& msg) {
    throw Error(ErrorCode::Config, std::string(key) + ": " + msg);
}

const KeyInfo& lookup(std::string_view key) {
    for (const auto& k : kKeys)
        if (k.name == key) return k;
    fail(key, "unknown configuration key");
}

double as_real(std::string_view key, const nlohmann::json& v) {
    if (!v.is_number()) fail(key, "expected a number, got " + v.dump());
    return v.get<double>();
}

std::int64_t as_signed(std::string_view key, const nlohmann::json& v) {
    if (!v.is_number_integer()) fail(key, "expected an integer, got " + v.dump());
    return v.get<std::int64_t>();
}

std::uint64_t as_unsigned(std::string_view key, const nlohmann::json& v) {
    if (!v.is_number_unsigned()) fail(key, "expected a non-negative integer, got " + v.dump());
    return v.get<std::uint64_t>();
}

std::string as_text(std::string_view key, const nlohmann::json& v) {
    if (!v.is_string()) fail(key, "expected a string, got " + v.dump());
    return v.get<std::string>();
}

template <class T, class F>
std::vector<T> as_list(std::string_view key, const nlohmann::json& v, F&& item) {
    if (!v.is_array()) fail(key, "expected a list, got " + v.dump());
    std::vector<T> out;
    for (const auto& e : v) out.push_back(static_cast<T>(item(key, e)));
    return out;
}

void set_key(RunConfig& c, std::string_view key, const nlohmann::json& v) {
    lookup(key);
    if (key == "form") c.form = as_text(key, v);
    else if (key == "epsilon") c.epsilon = as_real(key, v);
    else if (key == "potential") c.potential = as_list<double>(key, v, as_real);
    else if (key == "t_end") c.t_end = as_real(key, v);
    else if (key == "cfl") c.cfl = as_real(key, v);
    else if (key == "scheme") c.scheme = as_text(key, v);
    else if (key == "sample_every") {
        const auto s = as_signed(key, v);
        if (s < std::numeric_limits<int>::min() || s > std::numeric_limits<int>::max()) fail(key, "out of range");
        c.sample_every = static_cast<int>(s);
    } else if (key == "n_points") c.n_points = as_unsigned(key, v);
    else if (key == "sphere_dim") c.sphere_dim = as_unsigned(key, v);
    else if (key == "initial") c.initial = as_text(key, v);
    else if (key == "amplitude") c.amplitude = as_real(key, v);
    else if (key == "n_modes") {
        const auto s = as_signed(key, v);
        if (s < std::numeric_limits<int>::min() || s > std::numeric_limits<int>::max()) fail(key, "out of range");
        c.n_modes = static_cast<int>(s);
    } else if (key == "decay") c.decay = as_real(key, v);
    else if (key == "seed") c.seed = as_unsigned(key, v);
    else if (key == "out") c.out = as_text(key, v);
    else if (key == "threads") {
        const auto t = as_unsigned(key, v);
        if (t > 1024) fail(key, "must be at most 1024");
        c.threads = static_cast<unsigned>(t);
    } else if (key == "sample_dt") c.sample_dt = as_real(key, v);
    else if (key == "n_list") c.n_list = as_list<std::size_t>(key, v, as_unsigned);
    else if (key == "epsilons") c.epsilons = as_list<double>(key, v, as_real);
    else if (key == "delta") c.delta = as_real(key, v);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) fail(key, "cannot parse '" + std::string(text) + "' as a number");
    return value;
}

nlohmann::json parse_scalar(std::string_view key, Kind kind, std::string_view text) {
    switch (kind) {
        case Kind::Real:
        case Kind::RealList: return parse_number<double>(key, text);
        case Kind::Signed: return parse_number<std::int64_t>(key, text);
        case Kind::Unsigned:
        case Kind::UnsignedList: return parse_number<std::uint64_t>(key, text);
        case Kind::Text: return std::string(text);
    }
    return nullptr;
}

void require_range(std::string_view key, double v, double lo, double hi, const std::string& range) {
    if (!(v >= lo && v <= hi)) fail(key, "must lie in " + range + ", got " + format_double(v));
}

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& k : kKeys) keys.emplace_back(k.name);
    return keys;
}

nlohmann::json to_json(const RunConfig& c) {
    return {{"form", c.form},
            {"epsilon", c.epsilon},
            {"potential", c.potential},
            {"t_end", c.t_end},
            {"cfl", c.cfl},
            {"scheme", c.scheme},
            {"sample_every", c.sample_every},
            {"n_points", c.n_points},
            {"sphere_dim", c.sphere_dim},
            {"initial", c.initial},
            {"amplitude", c.amplitude},
            {"n_modes", c.n_modes},
            {"decay", c.decay},
            {"seed", c.seed},
            {"out", c.out},
            {"threads", c.threads},
            {"sample_dt", c.sample_dt},
            {"n_list", c.n_list},
            {"epsilons", c.epsilons},
            {"delta", c.delta}};
}

RunConfig from_json(const nlohmann::json& j, RunConfig base) {
    if (!j.is_object()) throw Error(ErrorCode::Config, "config: top level must be a JSON object");
    for (const auto& [key, value] : j.items()) set_key(base, key, value);
    return base;
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw Error(ErrorCode::Config, "--set: expected key=value, got '" + std::string(assignment) + "'");
    }
    const std::string_view key = assignment.substr(0, eq);
    const std::string_view text = assignment.substr(eq + 1);
    const Kind kind = lookup(key).kind;

    nlohmann::json value;
    if (kind == Kind::RealList || kind == Kind::UnsignedList) {
        value = nlohmann::json::array();
        std::size_t start = 0;
        while (start < text.size()) {
            const auto comma = text.find(',', start);
            const auto item = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            value.push_back(parse_scalar(key, kind, item));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    } else {
        value = parse_scalar(key, kind, text);
    }
    set_key(cfg, key, value);
}

RunConfig load_config(const std::optional<std::filesystem::path>& file, const std::vector<std::string>& overrides) {
    RunConfig cfg;
    if (file) {
        std::ifstream in(*file);
        if (!in) throw Error(ErrorCode::Config, "config: cannot open " + file->string());
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw Error(ErrorCode::Config, "config: " + file->string() + " is not valid JSON (" + e.what() + ")");
        }
        cfg = from_json(j, cfg);
    }
    for (const auto& o : overrides) apply_override(cfg, o);
    return cfg;
}

FlowForm RunConfig::resolved_form() const {
    if (form == "auto") return epsilon > 0.0 ? FlowForm::Regularized : FlowForm::Intrinsic;
    try {
        return parse_flow_form(form);
    } catch (const Error&) {
        fail("form", "unknown form '" + form + "' (auto|extrinsic|intrinsic|regularized|classical_ll)");
    }
}

PotentialMatrix RunConfig::potential_matrix() const {
    const std::size_t d = sphere_dim + 1;
    if (potential.empty()) return PotentialMatrix::zero(d);
    if (potential.size() == d) return PotentialMatrix::diagonal(potential);
    if (potential.size() == d * d) {
        try {
            return PotentialMatrix(d, potential);
        } catch (const Error& e) {
            fail("potential", e.detail());
        }
    }
    fail("potential", "expected 0, " + std::to_string(d) + " (diagonal) or " + std::to_string(d * d) +
                          " (row-major) entries for sphere_dim " + std::to_string(sphere_dim) + ", got " +
                          std::to_string(potential.size()));
}

FlowSpec RunConfig::flow_spec() const {
    FlowSpec s;
    s.form = resolved_form();
    s.epsilon = epsilon;
    s.a = potential_matrix();
    s.t_end = t_end;
    s.cfl = cfl;
    try {
        s.scheme = parse_scheme(scheme);
    } catch (const Error&) {
        fail("scheme", "unknown scheme '" + scheme + "' (spectral|fd4)");
    }
    s.sample_every = sample_every;
    return s;
}

InitialKind RunConfig::initial_kind() const {
    try {
        return parse_initial_kind(initial);
    } catch (const Error&) {
        fail("initial", "unknown kind '" + initial + "' (great_circle|perturbed_circle|random_smooth)");
    }
}

InitialParams RunConfig::initial_params() const {
    InitialParams p;
    p.n_points = n_points;
    p.sphere_dim = sphere_dim;
    p.amplitude = amplitude;
    p.n_modes = n_modes;
    p.decay = decay;
    return p;
}

StudyOptions RunConfig::study_options() const {
    StudyOptions o;
    o.n_points = n_points;
    o.cfl = cfl;
    o.scheme = flow_spec().scheme;
    o.threads = threads;
    o.seed = seed;
    o.sample_dt = sample_dt;
    return o;
}

void RunConfig::validate() const {
    if (n_points < 8) fail("n_points", "must be >= 8, got " + std::to_string(n_points));
    if (sphere_dim < 1) fail("sphere_dim", "must be >= 1, got 0");
    if (sphere_dim > 64) fail("sphere_dim", "must be <= 64, got " + std::to_string(sphere_dim));
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        fail("epsilon", "must lie in (0, 1] (or be 0 for the undamped flow), got " + format_double(epsilon));
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) fail("t_end", "must be positive and finite");
    if (!(cfl > 0.0) || !std::isfinite(cfl)) fail("cfl", "must be positive and finite");
    if (sample_every < 1) fail("sample_every", "must be >= 1");
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) fail("amplitude", "must be finite and >= 0");
    if (n_modes < 1) fail("n_modes", "must be >= 1");
    if (!std::isfinite(decay)) fail("decay", "must be finite");
    if (threads < 1) fail("threads", "must be >= 1");
    if (out.empty()) fail("out", "must not be empty");
    if (!(sample_dt > 0.0) || !std::isfinite(sample_dt)) fail("sample_dt", "must be positive and finite");
    if (!(delta >= 0.0) || !std::isfinite(delta)) fail("delta", "must be finite and >= 0");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 8) fail("n_list", "entries must be >= 8");
        if (i > 0 && n_list[i] <= n_list[i - 1]) fail("n_list", "must be strictly ascending");
    }
    if (n_list.empty()) fail("n_list", "must not be empty");
    if (epsilons.empty()) fail("epsilons", "must not be empty");
    for (std::size_t i = 0; i < epsilons.size(); ++i) {
        require_range("epsilons", epsilons[i], 0.0, 1.0, "[0, 1]");
        if (i > 0 && !(epsilons[i] < epsilons[i - 1])) fail("epsilons", "must be strictly descending");
    }
    initial_kind();
    const FlowSpec spec = flow_spec();
    if (spec.form == FlowForm::Regularized && epsilon == 0.0) {
        fail("epsilon", "must lie in (0, 1] for form regularized, got 0");
    }
    try {
        spec.validate(sphere_dim);
    } catch (const Error& e) {
        throw Error(ErrorCode::Config, e.detail());
    }
}

}  // namespace gll::cli
