#include "secint/manifest.hpp"

#include <initializer_list>
#include <set>

#include <json.hpp>

namespace secint {

using Json = nlohmann::ordered_json;

namespace {

Json parse_json(std::string_view text)
{
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const Json::parse_error& e) {
        throw ParseError(std::string("manifest is not valid JSON: ") + e.what());
    }
}

void expect_object(const Json& j, const std::string& path)
{
    if (!j.is_object())
        throw ParseError(path + ": expected an object");
}

void allow_fields(const Json& j, const std::string& path, std::initializer_list<std::string_view> names)
{
    expect_object(j, path);
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (auto n : names)
            known = known || key == n;
        if (!known)
            throw ParseError(path + ": unknown field '" + key + "'");
    }
}

const Json* field(const Json& j, std::string_view name)
{
    auto it = j.find(std::string(name));
    return it == j.end() ? nullptr : &*it;
}

const Json& required(const Json& j, std::string_view name, const std::string& path)
{
    if (const auto* f = field(j, name))
        return *f;
    throw ParseError(path + ": missing field '" + std::string(name) + "'");
}

std::string get_string(const Json& j, std::string_view name, const std::string& path)
{
    const auto& f = required(j, name, path);
    if (!f.is_string())
        throw ParseError(path + "." + std::string(name) + ": expected a string");
    return f.get<std::string>();
}

std::string opt_string(const Json& j, std::string_view name, const std::string& path,
                       std::string fallback)
{
    return field(j, name) ? get_string(j, name, path) : fallback;
}

std::int64_t opt_int(const Json& j, std::string_view name, const std::string& path, std::int64_t fallback)
{
    const auto* f = field(j, name);
    if (!f)
        return fallback;
    if (!f->is_number_integer())
        throw ParseError(path + "." + std::string(name) + ": expected an integer");
    return f->get<std::int64_t>();
}

int get_int(const Json& j, std::string_view name, const std::string& path)
{
    required(j, name, path);
    const auto v = opt_int(j, name, path, 0);
    if (v < INT32_MIN || v > INT32_MAX)
        throw ParseError(path + "." + std::string(name) + ": integer out of range");
    return static_cast<int>(v);
}

bool opt_bool(const Json& j, std::string_view name, const std::string& path, bool fallback)
{
    const auto* f = field(j, name);
    if (!f)
        return fallback;
    if (!f->is_boolean())
        throw ParseError(path + "." + std::string(name) + ": expected true or false");
    return f->get<bool>();
}

const Json& opt_array(const Json& j, std::string_view name, const std::string& path)
{
    static const Json empty = Json::array();
    const auto* f = field(j, name);
    if (!f)
        return empty;
    if (!f->is_array())
        throw ParseError(path + "." + std::string(name) + ": expected an array");
    return *f;
}

std::string at(const std::string& path, std::string_view name, std::size_t i)
{
    return path + "." + std::string(name) + "[" + std::to_string(i) + "]";
}

Word word_field(const Json& j, std::string_view name, const std::string& path, const GroupSpec& spec,
                bool optional = false)
{
    if (optional && !field(j, name))
        return {};
    try {
        return parse_word(get_string(j, name, path), spec);
    } catch (const ParseError& e) {
        throw ParseError(path + "." + std::string(name) + ": " + e.what());
    }
}

GroupPtr group_field(const Json& root)
{
    try {
        return make_group(parse_group(get_string(root, "group", "manifest")));
    } catch (const ParseError& e) {
        throw ParseError(std::string("manifest.group: ") + e.what());
    }
}

Arc arc_field(const Json& j, const std::string& path)
{
    const auto s = get_string(j, "arc", path);
    if (s == "+")
        return Arc::Positive;
    if (s == "-")
        return Arc::Negative;
    throw ParseError(path + ".arc: expected \"+\" or \"-\"");
}

std::array<int, 2> sphere_pair(const Json& j, const std::string& path)
{
    const auto& f = required(j, "spheres", path);
    if (!f.is_array() || f.size() != 2 || !f[0].is_number_integer() || !f[1].is_number_integer())
        throw ParseError(path + ".spheres: expected [i, j]");
    return {f[0].get<int>(), f[1].get<int>()};
}

Pi2ClassDatum parse_pi2_entry(const Json& j, const std::string& path, const GroupPtr& group)
{
    allow_fields(j, path, {"name", "kind", "element", "lambda", "omega2"});
    Pi2ClassDatum c;
    c.name = get_string(j, "name", path);
    const auto kind = opt_string(j, "kind", path, "sphere");
    if (kind == "sphere")
        c.kind = Pi2ClassDatum::Kind::Sphere;
    else if (kind == "rp2")
        c.kind = Pi2ClassDatum::Kind::RP2;
    else
        throw ParseError(path + ".kind: expected \"sphere\" or \"rp2\"");
    c.element = word_field(j, "element", path, *group, true);
    if (const auto* l = field(j, "lambda")) {
        expect_object(*l, path + ".lambda");
        for (const auto& [key, value] : l->items()) {
            int k = 0;
            try {
                std::size_t used = 0;
                k = std::stoi(key, &used);
                if (used != key.size())
                    throw std::invalid_argument(key);
            } catch (const std::logic_error&) {
                throw ParseError(path + ".lambda: key '" + key + "' is not a sphere index");
            }
            if (!value.is_string())
                throw ParseError(path + ".lambda." + key + ": expected an element string");
            try {
                c.lambda.emplace(k, parse_element(value.get<std::string>(), group));
            } catch (const Error& e) {
                throw ParseError(path + ".lambda." + key + ": " + e.what());
            }
        }
    }
    c.omega2 = opt_bool(j, "omega2", path, false);
    return c;
}

Json emit_pi2_entry(const Pi2ClassDatum& c, const GroupSpec& spec)
{
    Json j;
    j["name"] = c.name;
    j["kind"] = c.kind == Pi2ClassDatum::Kind::RP2 ? "rp2" : "sphere";
    j["element"] = format_word(c.element, spec);
    Json l = Json::object();
    for (const auto& [k, v] : c.lambda)
        l[std::to_string(k)] = format_element(v);
    j["lambda"] = std::move(l);
    j["omega2"] = c.omega2;
    return j;
}

std::vector<Pi2ClassDatum> pi2_list(const Json& root, const GroupPtr& group)
{
    std::vector<Pi2ClassDatum> out;
    const auto& arr = opt_array(root, "pi2", "manifest");
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(parse_pi2_entry(arr[i], at("manifest", "pi2", i), group));
    return out;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

} // namespace

bool is_multi_manifest(std::string_view text)
{
    const auto root = parse_json(text);
    return root.is_object() && root.contains("n");
}

WhitneyDiagram parse_manifest(std::string_view text)
{
    const auto root = parse_json(text);
    const std::string m = "manifest";
    allow_fields(root, m, {"group", "double_points", "disks", "crossings", "pi2", "unframed",
                           "normal_bundle_trivial"});
    WhitneyDiagram d(group_field(root));
    const auto& spec = *d.group;
    const auto& points = opt_array(root, "double_points", m);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto path = at(m, "double_points", i);
        allow_fields(points[i], path, {"id", "sign", "g"});
        d.double_points.push_back({get_string(points[i], "id", path), get_int(points[i], "sign", path),
                                   word_field(points[i], "g", path, spec)});
    }
    const auto& disks = opt_array(root, "disks", m);
    for (std::size_t i = 0; i < disks.size(); ++i) {
        const auto path = at(m, "disks", i);
        const auto& j = disks[i];
        allow_fields(j, path, {"id", "positive", "negative", "g", "framing", "interior"});
        WhitneyDisk w{get_string(j, "id", path), get_string(j, "positive", path),
                      get_string(j, "negative", path), word_field(j, "g", path, spec),
                      opt_int(j, "framing", path, 0), {}};
        const auto& in = opt_array(j, "interior", path);
        for (std::size_t k = 0; k < in.size(); ++k) {
            const auto p = at(path, "interior", k);
            allow_fields(in[k], p, {"sign", "h"});
            w.interior.push_back({get_int(in[k], "sign", p), word_field(in[k], "h", p, spec)});
        }
        d.disks.push_back(std::move(w));
    }
    const auto& crossings = opt_array(root, "crossings", m);
    for (std::size_t i = 0; i < crossings.size(); ++i) {
        const auto path = at(m, "crossings", i);
        const auto& j = crossings[i];
        allow_fields(j, path, {"a", "b", "agree"});
        BoundaryCrossing c;
        for (auto [name, ref] : {std::pair{"a", &c.a}, std::pair{"b", &c.b}}) {
            const auto p = path + "." + name;
            const auto& r = required(j, name, path);
            allow_fields(r, p, {"disk", "arc"});
            *ref = {get_string(r, "disk", p), arc_field(r, p)};
        }
        c.agree = opt_bool(j, "agree", path, true);
        d.crossings.push_back(std::move(c));
    }
    d.pi2 = pi2_list(root, d.group);
    d.unframed = opt_bool(root, "unframed", m, false);
    d.normal_bundle_trivial = opt_bool(root, "normal_bundle_trivial", m, false);
    return d;
}

std::string emit_manifest(const WhitneyDiagram& d)
{
    const auto& spec = *d.group;
    Json root;
    root["group"] = spec.describe();
    Json points = Json::array();
    for (const auto& p : d.double_points)
        points.push_back(Json{{"id", p.id}, {"sign", p.sign}, {"g", format_word(p.g, spec)}});
    root["double_points"] = std::move(points);
    Json disks = Json::array();
    for (const auto& w : d.disks) {
        Json in = Json::array();
        for (const auto& x : w.interior)
            in.push_back(Json{{"sign", x.sign}, {"h", format_word(x.h, spec)}});
        disks.push_back(Json{{"id", w.id},
                             {"positive", w.positive},
                             {"negative", w.negative},
                             {"g", format_word(w.g, spec)},
                             {"framing", w.framing},
                             {"interior", std::move(in)}});
    }
    root["disks"] = std::move(disks);
    Json crossings = Json::array();
    auto ref = [](const ArcRef& r) {
        return Json{{"disk", r.disk}, {"arc", r.arc == Arc::Positive ? "+" : "-"}};
    };
    for (const auto& c : d.crossings)
        crossings.push_back(Json{{"a", ref(c.a)}, {"b", ref(c.b)}, {"agree", c.agree}});
    root["crossings"] = std::move(crossings);
    Json pi2 = Json::array();
    for (const auto& c : d.pi2)
        pi2.push_back(emit_pi2_entry(c, spec));
    root["pi2"] = std::move(pi2);
    root["unframed"] = d.unframed;
    root["normal_bundle_trivial"] = d.normal_bundle_trivial;
    return dump(root);
}

MultiDiagram parse_multi_manifest(std::string_view text)
{
    const auto root = parse_json(text);
    const std::string m = "manifest";
    allow_fields(root, m, {"group", "n", "double_points", "disks", "crossings", "pi2", "unframed",
                           "normal_bundle_trivial"});
    MultiDiagram d(group_field(root), get_int(root, "n", m));
    const auto& spec = *d.group;
    if (!opt_array(root, "crossings", m).empty())
        throw ValidationError("manifest.crossings: boundary crossings are not supported for n spheres; "
                              "resolve them into interior points first");
    const auto& points = opt_array(root, "double_points", m);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto path = at(m, "double_points", i);
        allow_fields(points[i], path, {"id", "sign", "spheres"});
        d.double_points.push_back({get_string(points[i], "id", path), get_int(points[i], "sign", path),
                                   sphere_pair(points[i], path)});
    }
    const auto& disks = opt_array(root, "disks", m);
    for (std::size_t i = 0; i < disks.size(); ++i) {
        const auto path = at(m, "disks", i);
        const auto& j = disks[i];
        allow_fields(j, path, {"id", "spheres", "positive", "negative", "g_pos", "g_neg", "framing",
                               "interior"});
        MultiDisk w{get_string(j, "id", path), sphere_pair(j, path), get_string(j, "positive", path),
                    get_string(j, "negative", path), word_field(j, "g_pos", path, spec),
                    word_field(j, "g_neg", path, spec), opt_int(j, "framing", path, 0), {}};
        const auto& in = opt_array(j, "interior", path);
        for (std::size_t k = 0; k < in.size(); ++k) {
            const auto p = at(path, "interior", k);
            allow_fields(in[k], p, {"sign", "sheet", "h"});
            w.interior.push_back({get_int(in[k], "sign", p), get_int(in[k], "sheet", p),
                                  word_field(in[k], "h", p, spec)});
        }
        d.disks.push_back(std::move(w));
    }
    d.pi2 = pi2_list(root, d.group);
    d.unframed = opt_bool(root, "unframed", m, false);
    const auto& flags = opt_array(root, "normal_bundle_trivial", m);
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (!flags[i].is_boolean())
            throw ParseError(at(m, "normal_bundle_trivial", i) + ": expected true or false");
        d.normal_bundle_trivial.push_back(flags[i].get<bool>());
    }
    return d;
}

std::string emit_multi_manifest(const MultiDiagram& d)
{
    const auto& spec = *d.group;
    Json root;
    root["group"] = spec.describe();
    root["n"] = d.n;
    Json points = Json::array();
    for (const auto& p : d.double_points)
        points.push_back(Json{{"id", p.id}, {"sign", p.sign}, {"spheres", p.spheres}});
    root["double_points"] = std::move(points);
    Json disks = Json::array();
    for (const auto& w : d.disks) {
        Json in = Json::array();
        for (const auto& x : w.interior)
            in.push_back(Json{{"sign", x.sign}, {"sheet", x.sheet}, {"h", format_word(x.h, spec)}});
        disks.push_back(Json{{"id", w.id},
                             {"spheres", w.spheres},
                             {"positive", w.positive},
                             {"negative", w.negative},
                             {"g_pos", format_word(w.g_pos, spec)},
                             {"g_neg", format_word(w.g_neg, spec)},
                             {"framing", w.framing},
                             {"interior", std::move(in)}});
    }
    root["disks"] = std::move(disks);
    root["crossings"] = Json::array();
    Json pi2 = Json::array();
    for (const auto& c : d.pi2)
        pi2.push_back(emit_pi2_entry(c, spec));
    root["pi2"] = std::move(pi2);
    root["unframed"] = d.unframed;
    Json flags = Json::array();
    for (bool f : d.normal_bundle_trivial)
        flags.push_back(f);
    root["normal_bundle_trivial"] = std::move(flags);
    return dump(root);
}

ElementManifest parse_element_manifest(std::string_view text)
{
    const auto root = parse_json(text);
    const std::string m = "element manifest";
    allow_fields(root, m, {"group", "element", "unframed", "n"});
    ElementManifest e{group_field(root), RingElement(make_group(GroupSpec::free({}))), false, 1};
    try {
        e.element = parse_element(get_string(root, "element", m), e.group);
    } catch (const ParseError& err) {
        throw ParseError(m + ".element: " + err.what());
    }
    e.unframed = opt_bool(root, "unframed", m, false);
    e.n = static_cast<int>(opt_int(root, "n", m, 1));
    return e;
}

std::string emit_element_manifest(const ElementManifest& e)
{
    Json root;
    root["group"] = e.group->describe();
    root["element"] = format_element(e.element);
    root["unframed"] = e.unframed;
    root["n"] = e.n;
    return dump(root);
}

std::vector<Pi2ClassDatum> parse_pi2_manifest(std::string_view text, const GroupPtr& group)
{
    const auto root = parse_json(text);
    allow_fields(root, "pi2 manifest", {"pi2"});
    return pi2_list(root, group);
}

std::string emit_pi2_manifest(const std::vector<Pi2ClassDatum>& pi2, const GroupSpec& spec)
{
    Json arr = Json::array();
    for (const auto& c : pi2)
        arr.push_back(emit_pi2_entry(c, spec));
    Json root;
    root["pi2"] = std::move(arr);
    return dump(root);
}

} // namespace secint
