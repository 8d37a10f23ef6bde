#include "levyifpt/jsonio.hpp"
#include "levyifpt/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

using nlohmann::json;

namespace levyifpt {

namespace {

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const char* context) {
    if (!j.is_object()) throw ValidationError(std::string(context) + ": expected a JSON object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!ok.count(key))
            throw ValidationError(std::string(context) + ": unknown key \"" + key + "\"");
    }
}

double need_number(const json& j, const char* key, const char* context) {
    if (!j.contains(key) || !j.at(key).is_number())
        throw ValidationError(std::string(context) + ": missing numeric field \"" + key + "\"");
    return j.at(key).get<double>();
}

std::vector<double> need_array(const json& j, const char* key, const char* context) {
    if (!j.contains(key) || !j.at(key).is_array())
        throw ValidationError(std::string(context) + ": missing array field \"" + key + "\"");
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number())
            throw ValidationError(std::string(context) + ": non-numeric entry in \"" + key + "\"");
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<ExpTerm> terms_from_json(const json& arr, const char* context) {
    std::vector<ExpTerm> out;
    for (const auto& e : arr) {
        require_keys(e, {"a", "alpha"}, context);
        out.push_back({need_number(e, "a", context), need_number(e, "alpha", context)});
    }
    return out;
}

json document_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
    return j;
}

void fmt17(std::string& out, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out += buf;
}

void dump_value(std::string& out, const json& j, int indent, int depth) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string closing(static_cast<std::size_t>(indent * depth), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) { out += "{}"; return; }
            out += "{";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ",";
                first = false;
                out += nl;
                out += pad;
                out += json(key).dump();
                out += indent > 0 ? ": " : ":";
                dump_value(out, value, indent, depth + 1);
            }
            out += nl;
            out += closing;
            out += "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) { out += "[]"; return; }
            out += "[";
            bool first = true;
            for (const auto& value : j) {
                if (!first) out += ",";
                first = false;
                out += nl;
                out += pad;
                dump_value(out, value, indent, depth + 1);
            }
            out += nl;
            out += closing;
            out += "]";
            return;
        }
        case json::value_t::number_float:
            fmt17(out, j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

} // namespace

LevyModel model_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw ValidationError("model: missing \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "brownian") {
        require_keys(j, {"kind", "eta"}, "brownian model");
        BrownianDriftLevy b{need_number(j, "eta", "brownian model")};
        LevyModel model = b;
        const auto rep = validate(model);
        if (!rep.ok()) throw ValidationError("model: " + rep.violations.front());
        return model;
    }
    if (kind != "mixed_exp") throw ValidationError("model: unknown kind \"" + kind + "\"");
    require_keys(j, {"kind", "sigma", "eta", "ell", "p", "up", "down"}, "mixed_exp model");
    MixedExpLevy m;
    m.sigma = need_number(j, "sigma", "mixed_exp model");
    m.eta = need_number(j, "eta", "mixed_exp model");
    m.ell = need_number(j, "ell", "mixed_exp model");
    m.p = need_number(j, "p", "mixed_exp model");
    if (j.contains("up")) m.up = terms_from_json(j.at("up"), "mixed_exp model up term");
    if (j.contains("down")) m.down = terms_from_json(j.at("down"), "mixed_exp model down term");
    LevyModel model = m;
    const auto rep = validate(model);
    if (!rep.ok()) throw ValidationError("model: " + rep.violations.front());
    return model;
}

json model_to_json(const LevyModel& model) {
    if (const auto* b = std::get_if<BrownianDriftLevy>(&model))
        return json{{"kind", "brownian"}, {"eta", b->eta}};
    const auto& m = std::get<MixedExpLevy>(model);
    json up = json::array(), down = json::array();
    for (const auto& t : m.up) up.push_back({{"a", t.a}, {"alpha", t.alpha}});
    for (const auto& t : m.down) down.push_back({{"a", t.a}, {"alpha", t.alpha}});
    return json{{"kind", "mixed_exp"}, {"sigma", m.sigma}, {"eta", m.eta},
                {"ell", m.ell},        {"p", m.p},         {"up", up},
                {"down", down}};
}

SurvivalCurve curve_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
        throw ValidationError("curve: missing \"kind\"");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "exponential") {
        require_keys(j, {"kind", "rate", "horizon"}, "exponential curve");
        return SurvivalCurve::exponential(need_number(j, "rate", "curve"),
                                          need_number(j, "horizon", "curve"));
    }
    if (kind == "weibull") {
        require_keys(j, {"kind", "shape", "scale", "horizon"}, "weibull curve");
        return SurvivalCurve::weibull(need_number(j, "shape", "curve"),
                                      need_number(j, "scale", "curve"),
                                      need_number(j, "horizon", "curve"));
    }
    if (kind == "piecewise_hazard") {
        require_keys(j, {"kind", "breakpoints", "rates", "horizon"}, "piecewise curve");
        return SurvivalCurve::piecewise_hazard(need_array(j, "breakpoints", "curve"),
                                               need_array(j, "rates", "curve"),
                                               need_number(j, "horizon", "curve"));
    }
    if (kind == "table") {
        require_keys(j, {"kind", "t", "survival", "horizon"}, "table curve");
        return SurvivalCurve::table(need_array(j, "t", "curve"),
                                    need_array(j, "survival", "curve"),
                                    need_number(j, "horizon", "curve"));
    }
    throw ValidationError("curve: unknown kind \"" + kind + "\"");
}

json curve_to_json(const SurvivalCurve& c) {
    switch (c.kind()) {
        case CurveKind::exponential:
            return json{{"kind", "exponential"}, {"rate", c.rate()}, {"horizon", c.horizon()}};
        case CurveKind::weibull:
            return json{{"kind", "weibull"}, {"shape", c.shape()}, {"scale", c.scale()},
                        {"horizon", c.horizon()}};
        case CurveKind::piecewise_hazard:
            return json{{"kind", "piecewise_hazard"}, {"breakpoints", c.breakpoints()},
                        {"rates", c.rates()}, {"horizon", c.horizon()}};
        case CurveKind::table:
            return json{{"kind", "table"}, {"t", c.table_t()}, {"survival", c.table_survival()},
                        {"horizon", c.horizon()}};
    }
    throw ValidationError("curve: unserializable kind");
}

FrailtySpec frailty_from_json(const json& j) {
    require_keys(j, {"states"}, "frailty spec");
    if (!j.contains("states") || !j.at("states").is_array())
        throw ValidationError("frailty spec: missing \"states\" array");
    FrailtySpec spec;
    for (const auto& js : j.at("states")) {
        require_keys(js, {"p", "names"}, "frailty state");
        FrailtyState state;
        state.prob = need_number(js, "p", "frailty state");
        if (!js.contains("names") || !js.at("names").is_array())
            throw ValidationError("frailty state: missing \"names\" array");
        for (const auto& jn : js.at("names")) {
            require_keys(jn, {"model", "curve", "lambda"}, "frailty name");
            if (!jn.contains("model") || !jn.contains("curve"))
                throw ValidationError("frailty name: needs \"model\" and \"curve\"");
            state.names.push_back({model_from_json(jn.at("model")),
                                   curve_from_json(jn.at("curve")),
                                   need_number(jn, "lambda", "frailty name")});
        }
        spec.states.push_back(std::move(state));
    }
    return spec;
}

CvaSpec cva_spec_from_json(const json& j) {
    require_keys(j, {"S0", "K", "T", "r", "d", "rho", "X", "Z", "curve", "numerics"},
                 "cva spec");
    CvaSpec spec;
    spec.S0 = need_number(j, "S0", "cva spec");
    spec.K = need_number(j, "K", "cva spec");
    spec.T = need_number(j, "T", "cva spec");
    spec.r = need_number(j, "r", "cva spec");
    spec.d = need_number(j, "d", "cva spec");
    spec.rho = need_number(j, "rho", "cva spec");
    if (!j.contains("X") || !j.contains("Z") || !j.contains("curve"))
        throw ValidationError("cva spec: needs \"X\", \"Z\" and \"curve\"");
    spec.X = model_from_json(j.at("X"));
    spec.Z = model_from_json(j.at("Z"));
    spec.curve = curve_from_json(j.at("curve"));
    if (j.contains("numerics")) {
        const auto& jn = j.at("numerics");
        require_keys(jn, {"alpha", "xi_max", "xi_points", "laplace_terms"}, "cva numerics");
        if (jn.contains("alpha")) spec.numerics.alpha = need_number(jn, "alpha", "numerics");
        if (jn.contains("xi_max")) spec.numerics.xi_max = need_number(jn, "xi_max", "numerics");
        if (jn.contains("xi_points"))
            spec.numerics.xi_points = static_cast<int>(need_number(jn, "xi_points", "numerics"));
        if (jn.contains("laplace_terms"))
            spec.numerics.laplace_terms =
                static_cast<int>(need_number(jn, "laplace_terms", "numerics"));
    }
    return spec;
}

LevyModel load_model(const std::string& path) { return model_from_json(document_from_file(path)); }
SurvivalCurve load_curve(const std::string& path) {
    return curve_from_json(document_from_file(path));
}
FrailtySpec load_frailty(const std::string& path) {
    return frailty_from_json(document_from_file(path));
}
CvaSpec load_cva_spec(const std::string& path) {
    return cva_spec_from_json(document_from_file(path));
}

std::string dump_json17(const json& j, int indent) {
    std::string out;
    dump_value(out, j, indent, 0);
    return out;
}

} // namespace levyifpt
