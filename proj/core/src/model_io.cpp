#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hgrn/csv.hpp"
#include "hgrn/errors.hpp"
#include "hgrn/model.hpp"

namespace hgrn {

namespace {

using nlohmann::json;

double number_field(const json& doc, const char* key)
{
    if (!doc.contains(key))
        throw ParameterError(std::string("model file is missing \"") + key + "\"");
    if (!doc[key].is_number())
        throw ParameterError(std::string("model field \"") + key + "\" must be a number");
    return doc[key].get<double>();
}

RateFunction rate_field(const json& doc, const char* key, double lo, double hi)
{
    if (!doc.contains(key))
        throw ParameterError(std::string("model file is missing \"") + key + "\"");
    const json& r = doc[key];
    if (r.is_number())
        return RateFunction::constant(r.get<double>(), lo, hi);
    if (!r.is_object() || !r.contains("nodes") || !r.contains("values"))
        throw ParameterError(std::string("rate \"") + key
                             + "\" must be a number or {\"nodes\":[...],\"values\":[...]}");
    try
    {
        return RateFunction(r["nodes"].get<std::vector<double>>(), r["values"].get<std::vector<double>>());
    }
    catch (const json::exception& e)
    {
        throw ParameterError(std::string("rate \"") + key + "\": " + e.what());
    }
}

json rate_json(const RateFunction& rate)
{
    return json{{"nodes", std::vector<double>(rate.nodes().begin(), rate.nodes().end())},
                {"values", std::vector<double>(rate.values().begin(), rate.values().end())}};
}

} // namespace

RawModel parse_raw_model(const std::string& json_text)
{
    json doc;
    try
    {
        doc = json::parse(json_text);
    }
    catch (const json::parse_error& e)
    {
        // nlohmann reports "line L, column C" in the message.
        throw ParameterError(std::string("model JSON: ") + e.what());
    }
    if (!doc.is_object())
        throw ParameterError("model JSON must be an object");
    RawModel raw;
    raw.a = number_field(doc, "a");
    raw.b = number_field(doc, "b");
    raw.c = number_field(doc, "c");
    raw.d = number_field(doc, "d");
    const double lo = raw.b != 0.0 ? raw.a / raw.b : 0.0;
    const double hi = raw.d != 0.0 ? raw.c / raw.d : 1.0;
    // Report a bad interval by name before constant rates are tabulated on it.
    if (!(raw.b > 0.0 && raw.d > 0.0 && lo < hi))
        validate(raw);
    raw.nu = rate_field(doc, "nu", lo, hi);
    raw.mu = rate_field(doc, "mu", lo, hi);
    return raw;
}

RawModel load_raw_model(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw DomainError("cannot open model file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_raw_model(buf.str());
}

std::string to_json(const RawModel& raw)
{
    json doc{{"a", raw.a}, {"b", raw.b}, {"c", raw.c}, {"d", raw.d},
             {"nu", rate_json(raw.nu)}, {"mu", rate_json(raw.mu)}};
    return doc.dump(2);
}

std::string to_json(const CanonicalModel& model) { return to_json(as_raw(model)); }

std::string model_hash(const CanonicalModel& model)
{
    json doc{{"b", model.b}, {"d", model.d}, {"nu", rate_json(model.nu)}, {"mu", rate_json(model.mu)}};
    return hex64(fnv1a64(doc.dump()));
}

} // namespace hgrn
