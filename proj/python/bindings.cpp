#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "secint/cli.hpp"
#include "secint/manifest.hpp"
#include "secint/moves.hpp"
#include "secint/multi.hpp"

namespace py = pybind11;
using namespace secint;

namespace {

py::dict quotient_dict(const QuotientElement& q)
{
    py::dict d;
    d["raw"] = format_element(q.raw);
    d["canonical"] = format_element(q.canonical);
    d["residue"] = format_element(q.residue);
    d["certified_zero"] = q.certified_zero;
    d["definitive"] = q.definitive;
    d["status"] = q.status();
    d["horizon"] = q.horizon;
    d["relations"] = q.instances;
    d["report"] = format_reduction_report(q, "value");
    return d;
}

RelationMode mode_from(const std::string& name)
{
    if (name == "pair")
        return RelationMode::Pair;
    if (name == "triple")
        return RelationMode::Triple;
    if (name == "component")
        return RelationMode::Component;
    throw ParseError("mode must be pair, triple or component, got '" + name + "'");
}

WhitneyDiagram single(const std::string& manifest, bool unframed)
{
    auto d = parse_manifest(manifest);
    d.unframed = d.unframed || unframed;
    return d;
}

MultiDiagram multi(const std::string& manifest, bool unframed)
{
    auto d = is_multi_manifest(manifest) ? parse_multi_manifest(manifest) : as_multi_diagram(parse_manifest(manifest));
    d.unframed = d.unframed || unframed;
    return d;
}

} // namespace

PYBIND11_MODULE(secint, m)
{
    m.doc() = "Exact secondary intersection invariants from Whitney-disk diagrams";

    auto error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", error.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", error.ptr());
    py::register_exception<MoveError>(m, "MoveError", error.ptr());
    py::register_exception<SpecMismatch>(m, "SpecMismatch", error.ptr());
    py::register_exception<VariantMismatch>(m, "VariantMismatch", error.ptr());

    m.def(
        "tau",
        [](const std::string& manifest, int int_bound, bool unframed) {
            return quotient_dict(compute_tau(single(manifest, unframed), int_bound));
        },
        py::arg("manifest"), py::arg("int_bound") = -1, py::arg("unframed") = false,
        "Single-sphere invariant of a JSON manifest.");

    m.def(
        "tau_n",
        [](const std::string& manifest, int int_bound, bool unframed) {
            return quotient_dict(compute_tau_n(multi(manifest, unframed), int_bound));
        },
        py::arg("manifest"), py::arg("int_bound") = -1, py::arg("unframed") = false,
        "n-sphere invariant; single-sphere manifests are read as n = 1.");

    m.def(
        "triple",
        [](const std::string& manifest, int int_bound) {
            const auto d = is_multi_manifest(manifest) ? parse_multi_manifest(manifest)
                                                       : parallel_copies(parse_manifest(manifest));
            return quotient_dict(compute_triple_lambda(d, int_bound));
        },
        py::arg("manifest"), py::arg("int_bound") = -1,
        "Triple intersection number of an n = 3 manifest, or of three parallel copies.");

    m.def(
        "mu", [](const std::string& manifest) {
            const auto d = parse_manifest(manifest);
            return format_element(self_intersection_mu(d.double_points, d.group));
        },
        py::arg("manifest"), "Self-intersection number.");

    m.def(
        "validate",
        [](const std::string& manifest) {
            if (is_multi_manifest(manifest))
                return validate_multi(parse_multi_manifest(manifest)).violations;
            return validate_diagram(parse_manifest(manifest)).violations;
        },
        py::arg("manifest"), "Validation violations; empty when valid.");

    m.def(
        "canonicalize",
        [](const std::string& element, const std::string& group, const std::string& mode, bool unframed) {
            const auto g = make_group(parse_group(group));
            RelationEngine engine(g, mode_from(mode), unframed);
            return format_element(engine.canonicalize(parse_element(element, g)));
        },
        py::arg("element"), py::arg("group") = "free:a,b", py::arg("mode") = "pair", py::arg("unframed") = false,
        "Canonical form modulo the local relations.");

    m.def(
        "orbit",
        [](const std::string& term, const std::string& group, const std::string& mode, bool unframed) {
            const auto g = make_group(parse_group(group));
            const auto x = parse_element(term, g);
            if (x.size() != 1)
                throw ParseError("orbit needs exactly one basis term");
            RelationEngine engine(g, mode_from(mode), unframed);
            const auto cls = signed_class_closure(x.terms().begin()->first, engine);
            py::list members;
            for (const auto& mem : cls.members)
                members.append(py::make_tuple(mem.sign, format_term(mem.term, *g)));
            py::dict d;
            d["representative"] = format_term(engine.closure(x.terms().begin()->first)->representative, *g);
            d["members"] = members;
            d["torsion2"] = cls.torsion2;
            d["zero_class"] = cls.zero_class;
            return d;
        },
        py::arg("term"), py::arg("group") = "free:a,b", py::arg("mode") = "pair", py::arg("unframed") = false,
        "Signed closure of one basis term.");

    m.def(
        "reduce",
        [](const std::string& element_manifest, const std::string& pi2_manifest, int int_bound) {
            const auto e = parse_element_manifest(element_manifest);
            const auto pi2 = parse_pi2_manifest(pi2_manifest, e.group);
            for (const auto& datum : pi2)
                validate_pi2(datum, *e.group);
            const auto kind = e.element.kind().value_or(TermKind::Pair);
            const auto mode = kind == TermKind::Triple      ? RelationMode::Triple
                              : kind == TermKind::Component ? RelationMode::Component
                                                            : RelationMode::Pair;
            RelationEngine engine(e.group, mode, e.unframed);
            const auto q = reduce_in_quotient(engine, e.element, pi2, int_bound, kind == TermKind::Triple ? 3 : e.n);
            auto d = quotient_dict(q);
            if (kind == TermKind::Pair)
                d["km"] = std::string(km_name(reduce_to_km(q, pi2, e.unframed)));
            return d;
        },
        py::arg("element_manifest"), py::arg("pi2_manifest"), py::arg("int_bound") = -1,
        "Reduces an element manifest modulo the pi2 data.");

    m.def(
        "cyclic_family", [](std::int64_t l, std::int64_t mm, std::int64_t n) { return emit_manifest(cyclic_family(l, mm, n)); },
        py::arg("l"), py::arg("m"), py::arg("n"), "Manifest of the cyclic example family.");

    m.def(
        "apply_move", [](const std::string& manifest, const std::string& line) {
            return emit_manifest(apply_move_command(parse_manifest(manifest), line));
        },
        py::arg("manifest"), py::arg("line"), "Applies one move script line and returns the new manifest.");

    m.def(
        "normalize_manifest",
        [](const std::string& manifest) {
            return is_multi_manifest(manifest) ? emit_multi_manifest(parse_multi_manifest(manifest))
                                               : emit_manifest(parse_manifest(manifest));
        },
        py::arg("manifest"), "Parses and re-emits a manifest in canonical layout.");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            const auto r = secint::run_cli(args);
            return py::make_tuple(r.exit_code, r.out, r.err);
        },
        py::arg("args"), "Runs the command line front end; returns (exit code, stdout, stderr).");
}
