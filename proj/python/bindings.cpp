// bindings.cpp — pybind11 module exposing sectors, Hamiltonians, solvers and experiment runners

#include "jch/experiments.hpp"
#include "jch/observables.hpp"
#include "jch/solvers.hpp"
#include "jch/xy.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace jch;

namespace {

LatticeSpec lattice(int num_sites, Boundary boundary, std::optional<int> photon_cutoff) {
    LatticeSpec lat{num_sites, boundary, photon_cutoff};
    lat.validate();
    return lat;
}

py::dict result_dict(const ExperimentConfig& cfg, const ExperimentResult& r) {
    auto json = py::module_::import("json");
    py::dict out;
    out["summary"] = json.attr("loads")(summary_json(cfg, r).dump());
    out["runtimes"] = json.attr("loads")(r.runtimes.dump());
    py::list sweep;
    for (const auto& row : r.sweep)
        sweep.append(py::make_tuple(row.delta_over_g, row.mode, row.var_N_mid, row.stderr_value, row.n_sites,
                                    row.filling));
    py::list series;
    for (const auto& row : r.timeseries)
        series.append(py::make_tuple(row.t_times_A, row.observable_label, row.value, row.case_label));
    out["sweep"] = sweep;
    out["timeseries"] = series;
    out["passed"] = r.passed();
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Jaynes-Cummings-Hubbard chain simulator";

    py::enum_<Boundary>(m, "Boundary").value("open", Boundary::open).value("periodic", Boundary::periodic);
    py::enum_<Frame>(m, "Frame").value("rotating", Frame::rotating).value("lab", Frame::lab);
    py::enum_<Branch>(m, "Branch").value("minus", Branch::minus).value("plus", Branch::plus);

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init([](double g, double hop_A, double detuning, double kappa, double gamma, int filling,
                         double omega_d) {
                 ModelParams p{g, hop_A, detuning, kappa, gamma, filling, omega_d};
                 p.validate();
                 return p;
             }),
             py::arg("g") = 1.0, py::arg("hop_A") = 0.01, py::arg("detuning") = 0.0, py::arg("kappa") = 0.0,
             py::arg("gamma") = 0.0, py::arg("filling") = 1, py::arg("omega_d") = 1.0e4)
        .def_readwrite("g", &ModelParams::g)
        .def_readwrite("hop_A", &ModelParams::hop_A)
        .def_readwrite("detuning", &ModelParams::detuning)
        .def_readwrite("kappa", &ModelParams::kappa)
        .def_readwrite("gamma", &ModelParams::gamma)
        .def_readwrite("filling", &ModelParams::filling)
        .def_readwrite("omega_d", &ModelParams::omega_d);

    m.def(
        "sector_configs",
        [](int num_sites, int total, Boundary boundary, std::optional<int> photon_cutoff) {
            const auto s = make_sector(lattice(num_sites, boundary, photon_cutoff), total);
            std::vector<std::vector<std::pair<int, bool>>> out;
            for (std::size_t i = 0; i < s->dimension(); ++i) {
                std::vector<std::pair<int, bool>> row;
                for (const auto& c : s->config(i)) row.emplace_back(c.photon_number, c.atom_excited);
                out.push_back(std::move(row));
            }
            return out;
        },
        "Basis configurations [(photons, atom_excited) per site] in canonical order.", py::arg("num_sites"),
        py::arg("total"), py::arg("boundary") = Boundary::open, py::arg("photon_cutoff") = py::none());

    m.def(
        "sector_dimension",
        [](int num_sites, int total, std::optional<int> photon_cutoff) {
            return make_sector(lattice(num_sites, Boundary::open, photon_cutoff), total)->dimension();
        },
        py::arg("num_sites"), py::arg("total"), py::arg("photon_cutoff") = py::none());

    m.def(
        "hamiltonian",
        [](int num_sites, int total, const ModelParams& params, Boundary boundary, std::optional<int> photon_cutoff,
           Frame frame) {
            const auto s = make_sector(lattice(num_sites, boundary, photon_cutoff), total);
            return build_hamiltonian(s, params, frame).matrix;
        },
        "Sector Hamiltonian as a scipy.sparse CSR matrix.", py::arg("num_sites"), py::arg("total"),
        py::arg("params"), py::arg("boundary") = Boundary::open, py::arg("photon_cutoff") = py::none(),
        py::arg("frame") = Frame::rotating);

    m.def(
        "ground_state",
        [](int num_sites, const ModelParams& params, Boundary boundary, std::optional<int> photon_cutoff,
           std::optional<int> site) {
            const auto s = make_sector(lattice(num_sites, boundary, photon_cutoff), num_sites * params.filling);
            const auto gs = ground_state(build_hamiltonian(s, params));
            const QuantumState psi{s, gs.vector};
            const auto mom = excitation_moments(psi, site.value_or(middle_site(num_sites)));
            py::dict out;
            out["energy"] = gs.energy;
            out["vector"] = gs.vector;
            out["residual"] = gs.residual;
            out["mean"] = mom.mean;
            out["variance"] = mom.variance;
            return out;
        },
        "Ground state at filling * num_sites excitations with the site-number moments.", py::arg("num_sites"),
        py::arg("params"), py::arg("boundary") = Boundary::open, py::arg("photon_cutoff") = py::none(),
        py::arg("site") = py::none());

    m.def(
        "evolve_polaritons",
        [](const std::vector<std::pair<int, Branch>>& occupations, const ModelParams& params,
           const std::vector<double>& times, Boundary boundary, int site) {
            int total = 0;
            std::vector<LocalPolariton> occ;
            for (const auto& [n, b] : occupations) {
                occ.push_back({n, b});
                total += n;
            }
            const SectorFamily fam(lattice(static_cast<int>(occ.size()), boundary, {}), total);
            const auto psi0 = polariton_product_state(fam, occ);
            const auto H = TimeDependentOperator::constant(build_hamiltonian(psi0.sector, params));
            std::vector<std::vector<double>> out;
            for (const auto& s : evolve(H, psi0, times)) {
                std::vector<double> row;
                for (int n = 1; n <= std::max(1, total); ++n) row.push_back(polariton_population(s, site, n, Branch::minus));
                out.push_back(std::move(row));
            }
            return out;
        },
        "Evolves a polariton product state; returns P(|n->_site) for n = 1..total at each time.",
        py::arg("occupations"), py::arg("params"), py::arg("times"), py::arg("boundary") = Boundary::open,
        py::arg("site"));

    m.def("single_cell_level", &single_cell_level, py::arg("n"), py::arg("branch"), py::arg("detuning"),
          py::arg("g") = 1.0);
    m.def("dispersive_shift", &dispersive_shift, py::arg("n"), py::arg("delta"), py::arg("g") = 1.0);
    m.def("xy_effective_coupling", &xy::effective_coupling, py::arg("params"));
    m.def("trajectory_seed", &trajectory_seed, py::arg("base_seed"), py::arg("index"));
    m.def("middle_site", &middle_site, py::arg("num_sites"));

    m.def(
        "parse_config",
        [](const std::string& text) {
            return py::module_::import("json").attr("loads")(config_to_json(parse_config(text)).dump());
        },
        "Validates config text and returns its echo.", py::arg("text"));

    m.def(
        "run_experiment",
        [](const std::string& text, int threads, std::optional<std::string> output_dir) {
            auto cfg = parse_config(text);
            if (output_dir) cfg.output_dir = *output_dir;
            ExperimentResult r;
            {
                py::gil_scoped_release release;
                r = run_experiment(cfg, threads);
            }
            if (output_dir) write_outputs(cfg, r);
            return result_dict(cfg, r);
        },
        "Runs the experiment described by config text. Files are written only when output_dir is given.",
        py::arg("config_text"), py::arg("threads") = 1, py::arg("output_dir") = py::none());

    m.def("format_double", &format_double, py::arg("x"));
    m.attr("__version__") = "1.0.0";
}
