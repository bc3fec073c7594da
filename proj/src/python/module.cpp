#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sosround/acceptance.hpp"
#include "sosround/conditioning.hpp"
#include "sosround/errors.hpp"
#include "sosround/instances.hpp"
#include "sosround/oracle.hpp"
#include "sosround/random.hpp"
#include "sosround/rounding.hpp"

namespace py = pybind11;
using namespace sosround;

namespace {

std::vector<int> signs(const std::vector<int>& x) {
    // Python side passes ±1 per vertex without the unused slot 0.
    std::vector<int> v(x.size() + 1, 0);
    std::copy(x.begin(), x.end(), v.begin() + 1);
    return v;
}

std::vector<int> strip(const std::vector<int>& x) { return x.empty() ? x : std::vector<int>(x.begin() + 1, x.end()); }

py::tuple oracle_tuple(const OracleResult& r) { return py::make_tuple(r.value, strip(r.witness)); }

PipelineReport run(const std::string& problem, py::object instance, const PipelineParams& p, StepOneCache* cache) {
    Problem prob = parse_problem(problem);
    if (prob == Problem::Cnf2Del) return cnf2del_pipeline(instance.cast<TwoCnfFormula>(), p, cache);
    if (prob == Problem::SDC) {
        if (py::isinstance<TwoCnfFormula>(instance))
            return sdc_pipeline(reduce_2cnf_to_symdicut(instance.cast<TwoCnfFormula>()), p, cache);
        return sdc_pipeline(instance.cast<SymmetricDigraph>(), p, cache);
    }
    auto g = instance.cast<UndirectedGraph>();
    switch (prob) {
        case Problem::VC: return vc_pipeline(g, p, cache);
        case Problem::BS: return bs_pipeline(g, p, cache);
        case Problem::USC: return usc_pipeline(g, p, cache);
        default: return uncut_pipeline(g, p, cache);
    }
}

}  // namespace

PYBIND11_MODULE(sosround, m) {
    m.doc() = "SoS relaxations with conditioning-based rounding for graph partitioning problems.";

    // Translators run most recent first, so the base class goes first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<InvalidInstance>(m, "InvalidInstance", PyExc_ValueError);
    py::register_exception<DegreeError>(m, "DegreeError", PyExc_ValueError);
    py::register_exception<ConditioningError>(m, "ConditioningError", PyExc_ArithmeticError);

    py::class_<UndirectedGraph>(m, "Graph")
        .def(py::init<int, std::vector<Edge>>(), py::arg("n"), py::arg("edges"))
        .def_readonly("n", &UndirectedGraph::n)
        .def_readonly("edges", &UndirectedGraph::edges)
        .def("to_dimacs", [](const UndirectedGraph& g) { return to_dimacs(g); })
        .def("__repr__", [](const UndirectedGraph& g) {
            return "<Graph n=" + std::to_string(g.n) + " m=" + std::to_string(g.edges.size()) + ">";
        });

    py::class_<TwoCnfFormula>(m, "Formula")
        .def(py::init([](int nvars, const std::vector<std::pair<int, int>>& clauses) {
                 std::vector<Clause> cs;
                 auto lit = [](int x) { return Literal{std::abs(x), x > 0 ? 1 : -1}; };
                 for (auto [a, b] : clauses) cs.push_back({lit(a), lit(b)});
                 return TwoCnfFormula(nvars, cs);
             }),
             py::arg("nvars"), py::arg("clauses"))
        .def_readonly("nvars", &TwoCnfFormula::nvars)
        .def_property_readonly("clauses",
                               [](const TwoCnfFormula& f) {
                                   std::vector<std::pair<int, int>> out;
                                   for (const auto& c : f.clauses) out.push_back({c.a.signed_var(), c.b.signed_var()});
                                   return out;
                               })
        .def("to_dimacs", [](const TwoCnfFormula& f) { return to_dimacs(f); });

    py::class_<SymmetricDigraph>(m, "SymmetricDigraph")
        .def(py::init<int, std::vector<Arc>>(), py::arg("n"), py::arg("arcs"))
        .def_readonly("n", &SymmetricDigraph::n)
        .def_readonly("arcs", &SymmetricDigraph::arcs);

    m.def("parse_graph", [](const std::string& text) { return parse_dimacs_graph(text); }, py::arg("text"));
    m.def("parse_cnf", [](const std::string& text) { return parse_dimacs_cnf(text); }, py::arg("text"));
    m.def("reduce_2cnf", &reduce_2cnf_to_symdicut, py::arg("formula"));
    m.def("reduce_uncut", &reduce_uncut_to_symdicut, py::arg("graph"));

    auto gen = m.def_submodule("gen", "Instance generators");
    gen.def("complete", &gen::complete);
    gen.def("cycle", &gen::cycle);
    gen.def("path", &gen::path);
    gen.def("star", &gen::star, py::arg("leaves"));
    gen.def("edgeless", &gen::edgeless);
    gen.def("petersen", &gen::petersen);
    gen.def("two_k4_bridge", &gen::two_k4_bridge);
    gen.def("gnp", [](int n, double p, std::uint64_t seed) {
        Rng rng(seed);
        return gen::gnp(n, p, rng);
    }, py::arg("n"), py::arg("p"), py::arg("seed"));

    py::class_<PseudoExpectation>(m, "PseudoExpectation")
        .def(py::init<int, int>(), py::arg("n"), py::arg("d"))
        .def_static("of_points",
                    [](int n, const std::vector<std::vector<int>>& points, int d) {
                        std::vector<std::vector<int>> pts;
                        for (const auto& x : points) pts.push_back(signs(x));
                        return pseudoexpectation_of(ExplicitDistribution::uniform_over(n, pts), d < 0 ? n : d);
                    },
                    py::arg("n"), py::arg("points"), py::arg("d") = -1,
                    "Moments of the uniform distribution over the given ±1 points.")
        .def_property_readonly("n", &PseudoExpectation::n)
        .def_property_readonly("degree", &PseudoExpectation::degree)
        .def("moment", [](const PseudoExpectation& pe, const std::vector<int>& s) {
            VarSet v;
            for (int i : s) v = v.with(i);
            return pe[v];
        }, py::arg("subset"))
        .def("mean", &PseudoExpectation::mean)
        .def("pair", &PseudoExpectation::pair)
        .def("serialize", [](const PseudoExpectation& pe) { return serialize(pe); })
        .def_static("deserialize", [](const std::string& t) { return deserialize(t); });

    m.def("condition", &condition, py::arg("pe"), py::arg("i"), py::arg("b"), py::arg("cond_tol") = kCondTol);
    m.def("potential", &potential, py::arg("pe"));
    m.def("step_gain_identity", &step_gain_identity, py::arg("pe"), py::arg("i"), py::arg("j"),
          py::arg("cond_tol") = kCondTol);
    m.def("hollowize", [](const PseudoExpectation& pe, double tau, double gamma, int ell) {
        auto [out, trace] = hollowize(pe, HollowParams{tau, gamma, ell});
        std::vector<py::tuple> steps;
        for (const auto& s : trace.steps)
            steps.push_back(py::make_tuple(s.var, s.sign, s.potential_before, s.potential_after));
        return py::make_tuple(out, steps);
    }, py::arg("pe"), py::arg("tau"), py::arg("gamma"), py::arg("ell"),
       "Returns (pe, [(var, sign, potential_before, potential_after), ...]).");

    m.def("exact_vc", [](const UndirectedGraph& g) { return oracle_tuple(exact_vc(g)); });
    m.def("exact_uncut", [](const UndirectedGraph& g) { return oracle_tuple(exact_uncut(g)); });
    m.def("exact_2cnf_del", [](const TwoCnfFormula& f) { return oracle_tuple(exact_2cnf_del(f)); });
    m.def("exact_sdc", [](const SymmetricDigraph& g) { return oracle_tuple(exact_sdc(g)); });
    m.def("exact_bs", [](const UndirectedGraph& g, double c) { return oracle_tuple(exact_bs(g, c)); }, py::arg("g"),
          py::arg("c") = 1.0 / 3.0);
    m.def("exact_usc", [](const UndirectedGraph& g) {
        auto r = exact_usc(g);
        return py::make_tuple(r.phi, strip(r.witness));
    });

    m.def("compute_degree", &compute_degree, py::arg("n"), py::arg("r"), py::arg("cap"));

    py::class_<PipelineParams>(m, "Params")
        .def(py::init([](double r, int degree_cap, std::uint64_t seed, bool oracle, const std::string& theta_mode) {
                 PipelineParams p;
                 p.r = r;
                 p.degree_cap = degree_cap;
                 p.seed = seed;
                 p.run_oracle = oracle;
                 p.theta_mode = parse_theta_mode(theta_mode);
                 p.validate();
                 return p;
             }),
             py::arg("r") = 2.0, py::arg("degree_cap") = 4, py::arg("seed") = 0, py::arg("oracle") = false,
             py::arg("theta_mode") = "enumerate")
        .def_readwrite("r", &PipelineParams::r)
        .def_readwrite("degree_cap", &PipelineParams::degree_cap)
        .def_readwrite("seed", &PipelineParams::seed)
        .def_readwrite("oracle", &PipelineParams::run_oracle);

    py::class_<StepOneCache>(m, "Cache").def(py::init<>()).def("__len__", &StepOneCache::size);

    py::class_<PipelineReport>(m, "Report")
        .def_property_readonly("problem", [](const PipelineReport& r) { return to_string(r.problem); })
        .def_readonly("n", &PipelineReport::n)
        .def_readonly("degree", &PipelineReport::degree)
        .def_property_readonly("assignment", [](const PipelineReport& r) { return strip(r.assignment); })
        .def_readonly("signed_set", &PipelineReport::signed_set)
        .def_readonly("objective", &PipelineReport::objective)
        .def_readonly("obj_star", &PipelineReport::obj_star)
        .def_readonly("oracle_opt", &PipelineReport::oracle_opt)
        .def_readonly("ratio", &PipelineReport::ratio)
        .def_readonly("valid", &PipelineReport::valid)
        .def_readonly("flags", &PipelineReport::flags)
        .def("to_json", &PipelineReport::to_json, py::arg("include_timing") = true);

    m.def("solve",
          [](const std::string& problem, py::object instance, const PipelineParams& p, StepOneCache* cache) {
              return run(problem, instance, p, cache);
          },
          py::arg("problem"), py::arg("instance"), py::arg("params") = PipelineParams{}, py::arg("cache") = nullptr,
          "Run one pipeline: vc, bs, usc, uncut (Graph), 2cnfdel (Formula) or sdc (Formula or SymmetricDigraph).");

    m.def("acceptance_keys", &acceptance_keys);
    m.def("run_acceptance", [](const std::string& filter) {
        AcceptanceOptions opt;
        opt.filter = filter;
        std::vector<py::dict> out;
        for (const auto& r : run_acceptance(opt)) {
            py::dict d;
            d["id"] = r.id;
            d["key"] = r.key;
            d["pass"] = r.pass;
            d["detail"] = r.detail;
            d["seconds"] = r.seconds;
            out.push_back(d);
        }
        return out;
    }, py::arg("filter") = "");
}
