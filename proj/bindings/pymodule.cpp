// Python bindings for the main operations: single Euler-characteristic
// evaluations, the rank-2 closed form, wall-crossing residues, diagonal
// families, and the identity suites. All numeric results are exact decimal
// strings; callers that want Python ints can apply int()/Fraction().

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "verlinde/formulas.hpp"
#include "verlinde/suites.hpp"
#include "verlinde/trees.hpp"

namespace py = pybind11;
using namespace verlinde;

namespace {

EulerQuery make_query(int g, int r, long k, const std::vector<long>& lambda,
                      const std::vector<long>& nu, const std::vector<std::string>& c) {
    EulerQuery q;
    q.g = g;
    q.r = r;
    q.k = k;
    for (long v : lambda) q.lambda.c.emplace_back(v);
    q.nu = nu;
    Coords cc;
    for (const std::string& s : c) cc.push_back(rat_parse(s));
    q.c = CoVector(cc);
    return q;
}

std::vector<std::pair<int, int>> edge_list(const OrderedTree& t) {
    std::vector<std::pair<int, int>> out;
    for (const Root& e : t.roots) out.emplace_back(e.i, e.j);
    return out;
}

}  // namespace

PYBIND11_MODULE(_verlinde, m) {
    m.doc() = "Exact Euler characteristics over moduli of parabolic bundles";

    m.def(
        "chi_line",
        [](int g, int r, long k, const std::vector<long>& lambda,
           const std::vector<std::string>& c) {
            return chi_line(make_query(g, r, k, lambda, {}, c)).value.get_str();
        },
        py::arg("g"), py::arg("r"), py::arg("k"), py::arg("lambda"), py::arg("c"),
        "Euler characteristic of the level-k determinant line bundle (exact string)");

    m.def(
        "chi_vector",
        [](int g, int r, long k, const std::vector<long>& lambda, const std::vector<long>& nu,
           const std::vector<std::string>& c) {
            return chi_vector(make_query(g, r, k, lambda, nu, c)).value.get_str();
        },
        py::arg("g"), py::arg("r"), py::arg("k"), py::arg("lambda"), py::arg("nu"), py::arg("c"),
        "Euler characteristic twisted by the nu-pushforward bundle (exact string)");

    m.def(
        "rank2_closed",
        [](int g, long k, long lambda1, const std::vector<long>& nu) {
            return rank2_closed(g, k, lambda1, nu).get_str();
        },
        py::arg("g"), py::arg("k"), py::arg("lambda1"), py::arg("nu"),
        "Rank-2 closed-form value (exact string)");

    m.def(
        "wallcross_residue",
        [](int g, int r, long k, const std::vector<long>& lambda, const std::vector<long>& nu,
           const std::vector<std::string>& c, const std::vector<int>& pi_prime, long level) {
            WallSpec wall;
            wall.r = r;
            wall.pi_prime = pi_prime;
            wall.level = level;
            return wallcross_residue(make_query(g, r, k, lambda, nu, c), wall).get_str();
        },
        py::arg("g"), py::arg("r"), py::arg("k"), py::arg("lambda"), py::arg("nu"), py::arg("c"),
        py::arg("pi_prime"), py::arg("level"),
        "Wall-crossing jump localized at the wall (exact string)");

    m.def(
        "diagonal_family",
        [](int r) {
            std::vector<std::vector<std::pair<int, int>>> out;
            for (const OrderedTree& t : enumerate_diagonal(r)) out.push_back(edge_list(t));
            return out;
        },
        py::arg("r"), "Certified diagonal family as edge lists");

    m.def(
        "suite_names", [] { return kSuiteNames; }, "Identity-suite names accepted by run_suite");

    m.def(
        "run_suite",
        [](const std::string& name, int jobs) {
            SuiteReport rep = run_suite(name, jobs);
            py::list checks;
            for (const CheckResult& c : rep.checks) {
                py::dict row;
                row["name"] = c.name;
                row["ok"] = c.ok;
                if (!c.ok) row["counterexample"] = c.detail;
                checks.append(row);
            }
            py::dict out;
            out["suite"] = rep.suite;
            out["checks"] = checks;
            out["ok"] = rep.ok();
            return out;
        },
        py::arg("name"), py::arg("jobs") = 1, "Run one identity suite and report each check");
}
